#pragma once

#include <cstddef>
#include <vector>

#include "mogt/mdp/value_iteration.hpp"
#include "mogt/outcome_distribution.hpp"
#include "mogt/rng.hpp"
#include "mogt/sim/environment.hpp"

namespace mogt::sim {

/// Inverse-CDF draw.
int sample_grasp_outcome(const OutcomeDistribution& dist, Rng& rng);

struct AttemptResult {
  int lifted_quantity = 0;
  int regrasps = 0;
  /// False when the attempt ran out of re-grasps and lifted without a vote.
  bool voted = false;
};

/// One grasp attempt: draw, sense, re-grasp until the vote fires or the
/// re-grasp budget is spent, then lift once.
AttemptResult simulate_attempt(std::size_t action, const EnvironmentConfig& env, Rng& rng);

struct TraceStep {
  int state = 0;
  std::size_t action = 0;
  int lifted_quantity = 0;
  bool deposited = false;
};

struct EpisodeResult {
  int transfers = 0;
  int lifts = 0;
  int regrasps = 0;
  int final_count = 0;
  /// True when the episode stopped at the lift cap short of the target.
  bool capped = false;
  std::vector<TraceStep> action_trace;

  bool success(int target_n) const noexcept { return final_count == target_n; }
};

/// Runs pick, lift, deposit-or-return until the receiving bin holds target_n
/// or episode_cap lifts have been made. `policy.action_for[s]` indexes
/// env.actions for every s < target_n.
EpisodeResult run_episode(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env, Rng& rng,
                          bool record_trace = false);

}  // namespace mogt::sim
