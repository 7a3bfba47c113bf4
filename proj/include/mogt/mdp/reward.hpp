#pragma once

namespace mogt::mdp {

/// Reward attached to the state reached after a transfer step.
///
/// shortfall_weight scales the -(n - s') term; it defaults to 1 and exists so
/// the whole reward can be rescaled by a common positive factor.
struct RewardParams {
  int target_n = 1;
  double goal_reward = 100000.0;
  double overshoot_penalty = -1000.0;
  double shortfall_weight = 1.0;

  /// Throws ValidationError unless target_n >= 1, goal_reward > 0,
  /// overshoot_penalty < 0 and shortfall_weight >= 0.
  void validate() const;

  RewardParams scaled(double factor) const;
};

/// -(n - s') below the target, goal_reward at the target, overshoot_penalty above it.
double reward(int s_prime, const RewardParams& params);

}  // namespace mogt::mdp
