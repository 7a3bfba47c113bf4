#pragma once

#include <cstddef>
#include <cstdint>

#include "mogt/execution.hpp"
#include "mogt/mdp/value_iteration.hpp"
#include "mogt/sim/environment.hpp"

namespace mogt::sim {

struct MetricSummary {
  double mean = 0.0;
  double std_error = 0.0;

  friend bool operator==(const MetricSummary&, const MetricSummary&) = default;
};

struct AggregateReport {
  std::size_t episodes = 0;
  MetricSummary transfers;
  MetricSummary lifts;
  MetricSummary regrasps;
  double success_rate = 0.0;
  std::size_t capped_episodes = 0;

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

/// Integer sums over a block of episodes. Episode i uses Rng::for_stream(seed, i),
/// so totals do not depend on how episodes are scheduled.
struct EpisodeTotals {
  std::uint64_t episodes = 0;
  std::uint64_t successes = 0;
  std::uint64_t capped = 0;
  std::uint64_t transfers = 0, transfers_sq = 0;
  std::uint64_t lifts = 0, lifts_sq = 0;
  std::uint64_t regrasps = 0, regrasps_sq = 0;

  friend bool operator==(const EpisodeTotals&, const EpisodeTotals&) = default;
};

EpisodeTotals run_episodes_serial(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env,
                                  std::size_t episodes, std::uint64_t seed);
EpisodeTotals run_episodes_omp(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env,
                               std::size_t episodes, std::uint64_t seed);

AggregateReport summarize(const EpisodeTotals& totals);

/// Throws ValidationError for zero episodes.
AggregateReport monte_carlo(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env,
                            std::size_t episodes, std::uint64_t seed, Execution execution = Execution::Parallel);

}  // namespace mogt::sim
