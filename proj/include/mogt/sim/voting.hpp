#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace mogt::sim {

enum class VotingRule {
  /// Lift at the first t where NONZERO held at t-2, t-1, t and the target estimator holds at t.
  TargetAtStreakEnd,
  /// As above, but the target estimator may hold at any of t-2, t-1, t.
  TargetInStreak,
};

std::string_view to_string(VotingRule rule);
/// Accepts "streak_end" / "in_streak".
VotingRule parse_voting_rule(std::string_view text);

/// 1-based timestep of the lift, or nullopt for no lift. Streams shorter than
/// three give nullopt. Throws ValidationError when the lengths differ.
std::optional<std::size_t> voting_decide(std::span<const bool> nonzero, std::span<const bool> target,
                                         VotingRule rule = VotingRule::TargetAtStreakEnd);

/// Probability that voting_decide lifts within `timesteps` steps when NONZERO
/// fires independently with p_nonzero and the target estimator with p_target
/// at every step.
double voting_trigger_probability(double p_nonzero, double p_target, std::size_t timesteps,
                                  VotingRule rule = VotingRule::TargetAtStreakEnd);

}  // namespace mogt::sim
