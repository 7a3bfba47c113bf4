#include "mogt/sim/environment.hpp"

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::sim {

std::string_view to_string(Routine routine) {
  return routine == Routine::AlwaysLift ? "always-lift" : "voting";
}

Routine parse_routine(std::string_view text) {
  if (text == "always-lift") return Routine::AlwaysLift;
  if (text == "voting") return Routine::VotingGated;
  throw ValidationError(fmt::format("unknown routine '{}' (expected always-lift or voting)", text));
}

ActionModel make_action_model(GraspAction action, std::optional<Estimator> estimator) {
  const Estimator e = estimator.value_or(default_target_estimator(action.target_quantity));
  return {std::move(action), e};
}

void EnvironmentConfig::validate() const {
  validate_actions(grasp_actions());
  sensor.validate();
  if (max_regrasps < 0) throw ValidationError("max_regrasps must be >= 0");
  if (timesteps_per_attempt < 0) throw ValidationError("timesteps_per_attempt must be >= 0");
  if (!(drop_on_lift_prob >= 0.0 && drop_on_lift_prob <= 1.0)) {
    throw ValidationError(fmt::format("drop_on_lift_prob {} outside [0, 1]", drop_on_lift_prob));
  }
  if (episode_cap < 1) throw ValidationError("episode_cap must be >= 1");
}

std::vector<GraspAction> EnvironmentConfig::grasp_actions() const {
  std::vector<GraspAction> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(a.action);
  return out;
}

std::optional<std::size_t> EnvironmentConfig::find(std::string_view id) const {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].action.id == id) return i;
  }
  return std::nullopt;
}

}  // namespace mogt::sim
