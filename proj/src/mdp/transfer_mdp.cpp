#include "mogt/mdp/transfer_mdp.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::mdp {

void RewardParams::validate() const {
  if (target_n < 1) throw ValidationError(fmt::format("target_n must be >= 1, got {}", target_n));
  if (!(goal_reward > 0.0)) throw ValidationError("goal_reward must be positive");
  if (!(overshoot_penalty < 0.0)) throw ValidationError("overshoot_penalty must be negative");
  if (!(shortfall_weight >= 0.0) || !std::isfinite(shortfall_weight)) {
    throw ValidationError("shortfall_weight must be finite and non-negative");
  }
}

RewardParams RewardParams::scaled(double factor) const {
  RewardParams out = *this;
  out.goal_reward *= factor;
  out.overshoot_penalty *= factor;
  out.shortfall_weight *= factor;
  return out;
}

double reward(int s_prime, const RewardParams& params) {
  const int n = params.target_n;
  if (s_prime < n) return -params.shortfall_weight * static_cast<double>(n - s_prime);
  if (s_prime == n) return params.goal_reward;
  return params.overshoot_penalty;
}

std::string_view to_string(OvershootMode mode) {
  return mode == OvershootMode::Reject ? "reject" : "absorb";
}

OvershootMode parse_overshoot_mode(std::string_view text) {
  if (text == "reject") return OvershootMode::Reject;
  if (text == "absorb") return OvershootMode::Absorb;
  throw ValidationError(fmt::format("unknown overshoot mode '{}' (expected reject or absorb)", text));
}

namespace {

void add_entry(std::vector<Transition>& row, Transition entry) {
  for (auto& existing : row) {
    if (existing.next == entry.next && existing.reward == entry.reward && existing.deposit == entry.deposit) {
      existing.probability += entry.probability;
      return;
    }
  }
  row.push_back(entry);
}

}  // namespace

TransferMdp TransferMdp::build(std::vector<GraspAction> actions, const RewardParams& params,
                               OvershootMode mode) {
  params.validate();
  validate_actions(actions);

  TransferMdp mdp;
  mdp.params_ = params;
  mdp.mode_ = mode;
  mdp.actions_ = std::move(actions);

  const std::size_t n = static_cast<std::size_t>(params.target_n);
  const std::size_t num_actions = mdp.actions_.size();
  mdp.num_states_ = mode == OvershootMode::Absorb ? n + 2 : n + 1;
  mdp.rows_.resize(mdp.num_states_ * num_actions);

  for (std::size_t s = 0; s < mdp.num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions; ++a) {
      auto& row = mdp.rows_[s * num_actions + a];
      if (s >= n) {
        row.push_back({s, 1.0, 0.0, false});
        continue;
      }
      const auto probs = mdp.actions_[a].distribution.probs();
      for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] == 0.0) continue;
        const std::size_t landed = s + k;
        if (landed <= n) {
          add_entry(row, {landed, probs[k], reward(static_cast<int>(landed), params), k > 0});
        } else if (mode == OvershootMode::Reject) {
          add_entry(row, {s, probs[k], params.overshoot_penalty, false});
        } else {
          add_entry(row, {n + 1, probs[k], params.overshoot_penalty, true});
        }
      }
    }
  }
  return mdp;
}

std::optional<std::size_t> TransferMdp::overshoot_state() const noexcept {
  if (mode_ == OvershootMode::Absorb) return goal_state() + 1;
  return std::nullopt;
}

std::span<const Transition> TransferMdp::transitions(std::size_t state, std::size_t action) const {
  if (state >= num_states_ || action >= actions_.size()) {
    throw ValidationError(fmt::format("no transition row for state {} action {}", state, action));
  }
  return rows_[state * actions_.size() + action];
}

double TransferMdp::probability(std::size_t state, std::size_t action, std::size_t next) const {
  double p = 0.0;
  for (const auto& t : transitions(state, action)) {
    if (t.next == next) p += t.probability;
  }
  return p;
}

double TransferMdp::expected_reward(std::size_t state, std::size_t action) const {
  double r = 0.0;
  for (const auto& t : transitions(state, action)) r += t.probability * t.reward;
  return r;
}

}  // namespace mogt::mdp
