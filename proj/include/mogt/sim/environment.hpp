#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mogt/grasp_action.hpp"
#include "mogt/sim/sensor.hpp"
#include "mogt/sim/voting.hpp"

namespace mogt::sim {

/// How a grasp attempt decides to lift.
enum class Routine {
  /// Lift the first draw; no sensing, no re-grasps.
  AlwaysLift,
  /// Watch the estimators and re-grasp until the voting rule fires.
  VotingGated,
};

std::string_view to_string(Routine routine);
/// Accepts "always-lift" / "voting".
Routine parse_routine(std::string_view text);

/// An action as the environment sees it: the in-pile outcome distribution plus
/// the estimator the voting rule watches for this action.
struct ActionModel {
  GraspAction action;
  Estimator target_estimator = Estimator::Geq2;
};

ActionModel make_action_model(GraspAction action, std::optional<Estimator> estimator = std::nullopt);

struct EnvironmentConfig {
  std::vector<ActionModel> actions;
  SensorModel sensor = SensorModel::perfect();
  Routine routine = Routine::VotingGated;
  VotingRule voting = VotingRule::TargetAtStreakEnd;
  int max_regrasps = 10;
  int timesteps_per_attempt = 20;
  /// Each lifted object falls back independently with this probability.
  double drop_on_lift_prob = 0.0;
  /// Lifts after which an episode is abandoned and counted as a failure.
  int episode_cap = 200;

  /// Throws ValidationError on bad bounds, rates, or action lists.
  void validate() const;
  std::vector<GraspAction> grasp_actions() const;
  /// Index of the action with this id.
  std::optional<std::size_t> find(std::string_view id) const;
};

}  // namespace mogt::sim
