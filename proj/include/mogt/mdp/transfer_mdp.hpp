#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mogt/grasp_action.hpp"
#include "mogt/mdp/reward.hpp"

namespace mogt::mdp {

/// What happens when a grasp would push the receiving bin past the target.
enum class OvershootMode {
  /// The lift is rejected and the objects go back to the origin bin: s' = s,
  /// with the overshoot penalty as that transition's reward. Matches the executor.
  Reject,
  /// The step enters a single absorbing overshoot state with the overshoot penalty.
  Absorb,
};

std::string_view to_string(OvershootMode mode);
/// Accepts "reject" / "absorb"; throws ValidationError otherwise.
OvershootMode parse_overshoot_mode(std::string_view text);

struct Transition {
  std::size_t next = 0;
  double probability = 0.0;
  double reward = 0.0;
  /// The step put objects into the receiving bin.
  bool deposit = false;
};

/// The pick-transfer MDP. States 0..n count objects in the receiving bin; n is
/// the absorbing goal. In Absorb mode state n + 1 is the absorbing overshoot
/// state. Every action is available in every non-terminal state. Immutable
/// once built.
class TransferMdp {
 public:
  /// Throws ValidationError for an empty action list, invalid reward params,
  /// or a malformed action distribution.
  static TransferMdp build(std::vector<GraspAction> actions, const RewardParams& params,
                           OvershootMode mode = OvershootMode::Reject);

  int target() const noexcept { return params_.target_n; }
  std::size_t num_states() const noexcept { return num_states_; }
  /// Non-terminal states are exactly 0..n-1.
  std::size_t num_decision_states() const noexcept { return static_cast<std::size_t>(params_.target_n); }
  std::size_t num_actions() const noexcept { return actions_.size(); }
  std::size_t goal_state() const noexcept { return static_cast<std::size_t>(params_.target_n); }
  std::optional<std::size_t> overshoot_state() const noexcept;
  bool is_terminal(std::size_t state) const noexcept { return state >= goal_state(); }

  /// Sparse row for (state, action); entries with equal (next, reward, deposit) are merged.
  std::span<const Transition> transitions(std::size_t state, std::size_t action) const;
  /// p(s, a, s'), summed over merged entries.
  double probability(std::size_t state, std::size_t action, std::size_t next) const;
  /// Sum over s' of p(s, a, s') * r(s, a, s').
  double expected_reward(std::size_t state, std::size_t action) const;

  const std::vector<GraspAction>& actions() const noexcept { return actions_; }
  const RewardParams& reward_params() const noexcept { return params_; }
  OvershootMode mode() const noexcept { return mode_; }

 private:
  TransferMdp() = default;

  std::vector<GraspAction> actions_;
  RewardParams params_;
  OvershootMode mode_ = OvershootMode::Reject;
  std::size_t num_states_ = 0;
  // Row (s, a) lives at rows_[s * num_actions + a].
  std::vector<std::vector<Transition>> rows_;
};

}  // namespace mogt::mdp
