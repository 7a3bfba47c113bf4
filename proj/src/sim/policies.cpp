#include "mogt/sim/policies.hpp"

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::sim {

std::string naive_policy(int current, int target_n, int capacity) {
  if (current >= target_n) throw ValidationError(fmt::format("state {} is not below target {}", current, target_n));
  const int remaining = target_n - current;
  if (remaining >= capacity) return grasp_action_id(std::nullopt);
  if (remaining <= 3) return grasp_action_id(remaining);
  return grasp_action_id(3);
}

mdp::Policy naive_policy_table(int target_n, const EnvironmentConfig& env, int capacity) {
  mdp::Policy policy;
  for (int s = 0; s < target_n; ++s) {
    const std::string id = naive_policy(s, target_n, capacity);
    const auto index = env.find(id);
    if (!index) throw ValidationError(fmt::format("naive policy needs action '{}' at state {}", id, s));
    policy.action_for.push_back(*index);
  }
  return policy;
}

int max_capacity(const EnvironmentConfig& env) {
  const auto index = env.find(grasp_action_id(std::nullopt));
  if (!index) throw ValidationError("no grasp-max action to take the capacity from");
  const auto probs = env.actions[*index].action.distribution.probs();
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

std::string single_object_policy() { return grasp_action_id(1); }

EnvironmentConfig single_object_environment(const EnvironmentConfig& base) {
  EnvironmentConfig env = base;
  env.actions = {make_action_model({single_object_policy(), 1, OutcomeDistribution::point_mass(1)})};
  env.sensor = SensorModel::perfect();
  env.drop_on_lift_prob = 0.0;
  return env;
}

mdp::Policy constant_policy(int target_n, std::size_t action) {
  mdp::Policy policy;
  policy.action_for.assign(static_cast<std::size_t>(std::max(target_n, 0)), action);
  return policy;
}

}  // namespace mogt::sim
