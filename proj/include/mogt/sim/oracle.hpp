#pragma once

#include <optional>
#include <vector>

#include "mogt/grasp_action.hpp"
#include "mogt/mdp/value_iteration.hpp"
#include "mogt/outcome_distribution.hpp"
#include "mogt/sim/environment.hpp"

namespace mogt::sim {

/// Closed form of one simulate_attempt call for an action.
struct AttemptModel {
  /// Distribution of the lifted quantity, after drops.
  OutcomeDistribution lifted;
  double expected_regrasps = 0.0;
  /// Probability the vote fires on a single draw, per drawn count.
  std::vector<double> trigger_probability;
};

AttemptModel attempt_model(std::size_t action, const EnvironmentConfig& env);

/// The environment's actions with their lifted-quantity distributions in place
/// of the in-pile ones; what a planner should see to match the executor.
std::vector<GraspAction> effective_actions(const EnvironmentConfig& env);

struct ExpectedMetrics {
  double transfers = 0.0;
  double lifts = 0.0;
  double regrasps = 0.0;
};

struct ExactExpectation {
  /// Expectations of the capped episode exactly as run_episode plays it.
  ExpectedMetrics capped;
  double success_probability = 0.0;
  /// Expectations without the lift cap; empty when some state reachable from 0
  /// cannot reach the target.
  std::optional<ExpectedMetrics> uncapped;
  /// States reachable from 0 under the policy that never reach the target.
  std::vector<int> stuck_states;
};

ExactExpectation exact_episode_expectation(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env);

}  // namespace mogt::sim
