#pragma once

#include "mogt/sim/episode.hpp"

// Unvalidated loops shared by the episode runner and the Monte Carlo kernels.
namespace mogt::sim::detail {

AttemptResult attempt(std::size_t action, const EnvironmentConfig& env, Rng& rng);
EpisodeResult play(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env, Rng& rng,
                   bool record_trace);
void check_policy(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env);

}  // namespace mogt::sim::detail
