#pragma once

#include <string>

#include "mogt/mdp/value_iteration.hpp"
#include "mogt/sim/environment.hpp"

namespace mogt::sim {

/// Maximum-capacity grasps while at least `capacity` objects remain, then an
/// exact grasp for the remainder: grasp-k for k in 1..3, grasp-3 for larger
/// remainders below capacity.
std::string naive_policy(int current, int target_n, int capacity);

/// naive_policy for every state, resolved against env's action ids. Throws
/// ValidationError when an action the rule needs is missing.
mdp::Policy naive_policy_table(int target_n, const EnvironmentConfig& env, int capacity);

/// Largest count with positive probability in the grasp-max distribution.
int max_capacity(const EnvironmentConfig& env);

std::string single_object_policy();

/// The baseline environment: one deterministic single-object grasp with perfect sensing.
EnvironmentConfig single_object_environment(const EnvironmentConfig& base);

/// The same action in every state.
mdp::Policy constant_policy(int target_n, std::size_t action);

}  // namespace mogt::sim
