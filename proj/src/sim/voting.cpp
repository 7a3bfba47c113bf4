#include "mogt/sim/voting.hpp"

#include <array>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::sim {

std::string_view to_string(VotingRule rule) {
  return rule == VotingRule::TargetAtStreakEnd ? "streak_end" : "in_streak";
}

VotingRule parse_voting_rule(std::string_view text) {
  if (text == "streak_end") return VotingRule::TargetAtStreakEnd;
  if (text == "in_streak") return VotingRule::TargetInStreak;
  throw ValidationError(fmt::format("unknown voting rule '{}' (expected streak_end or in_streak)", text));
}

namespace {

bool fires(bool nz2, bool tg2, bool nz1, bool tg1, bool nz, bool tg, VotingRule rule) {
  if (!(nz2 && nz1 && nz)) return false;
  return rule == VotingRule::TargetAtStreakEnd ? tg : (tg2 || tg1 || tg);
}

}  // namespace

std::optional<std::size_t> voting_decide(std::span<const bool> nonzero, std::span<const bool> target,
                                         VotingRule rule) {
  if (nonzero.size() != target.size()) {
    throw ValidationError(
        fmt::format("voting streams differ in length ({} vs {})", nonzero.size(), target.size()));
  }
  for (std::size_t i = 2; i < nonzero.size(); ++i) {
    if (fires(nonzero[i - 2], target[i - 2], nonzero[i - 1], target[i - 1], nonzero[i], target[i], rule)) {
      return i + 1;
    }
  }
  return std::nullopt;
}

double voting_trigger_probability(double p_nonzero, double p_target, std::size_t timesteps, VotingRule rule) {
  if (!(p_nonzero >= 0.0 && p_nonzero <= 1.0 && p_target >= 0.0 && p_target <= 1.0)) {
    throw ValidationError("voting probabilities must lie in [0, 1]");
  }
  // State: (nonzero, target) readings of the previous two steps, packed as
  // bits nz2 tg2 nz1 tg1. Before the first reading both are (false, false).
  std::array<double, 16> mass{};
  mass[0] = 1.0;
  double triggered = 0.0;
  for (std::size_t t = 0; t < timesteps; ++t) {
    std::array<double, 16> next{};
    for (unsigned h = 0; h < 16; ++h) {
      if (mass[h] == 0.0) continue;
      const bool nz2 = h & 8u;
      const bool tg2 = h & 4u;
      const bool nz1 = h & 2u;
      const bool tg1 = h & 1u;
      for (unsigned obs = 0; obs < 4; ++obs) {
        const bool nz = obs & 2u;
        const bool tg = obs & 1u;
        const double p = mass[h] * (nz ? p_nonzero : 1.0 - p_nonzero) * (tg ? p_target : 1.0 - p_target);
        if (fires(nz2, tg2, nz1, tg1, nz, tg, rule)) {
          triggered += p;
        } else {
          next[((h & 3u) << 2) | obs] += p;
        }
      }
    }
    mass = next;
  }
  return triggered;
}

}  // namespace mogt::sim
