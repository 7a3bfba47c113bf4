#include "mogt/sim/monte_carlo.hpp"

#include <cmath>

#include "mogt/errors.hpp"
#include "mogt/rng.hpp"
#include "episode_detail.hpp"

namespace mogt::sim {

namespace {

std::uint64_t sq(int x) { return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(x); }

}  // namespace

EpisodeTotals run_episodes_serial(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env,
                                  std::size_t episodes, std::uint64_t seed) {
  env.validate();
  detail::check_policy(policy, target_n, env);
  EpisodeTotals t;
  t.episodes = episodes;
  for (std::size_t i = 0; i < episodes; ++i) {
    Rng rng = Rng::for_stream(seed, i);
    const auto r = detail::play(policy, target_n, env, rng, false);
    t.successes += r.capped ? 0 : 1;
    t.capped += r.capped ? 1 : 0;
    t.transfers += static_cast<std::uint64_t>(r.transfers);
    t.transfers_sq += sq(r.transfers);
    t.lifts += static_cast<std::uint64_t>(r.lifts);
    t.lifts_sq += sq(r.lifts);
    t.regrasps += static_cast<std::uint64_t>(r.regrasps);
    t.regrasps_sq += sq(r.regrasps);
  }
  return t;
}

EpisodeTotals run_episodes_omp(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env,
                               std::size_t episodes, std::uint64_t seed) {
  env.validate();
  detail::check_policy(policy, target_n, env);
  std::uint64_t successes = 0, capped = 0;
  std::uint64_t transfers = 0, transfers_sq = 0, lifts = 0, lifts_sq = 0, regrasps = 0, regrasps_sq = 0;
  const auto n = static_cast<std::ptrdiff_t>(episodes);
#pragma omp parallel for schedule(static) \
    reduction(+ : successes, capped, transfers, transfers_sq, lifts, lifts_sq, regrasps, regrasps_sq)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(i));
    const auto r = detail::play(policy, target_n, env, rng, false);
    successes += r.capped ? 0 : 1;
    capped += r.capped ? 1 : 0;
    transfers += static_cast<std::uint64_t>(r.transfers);
    transfers_sq += sq(r.transfers);
    lifts += static_cast<std::uint64_t>(r.lifts);
    lifts_sq += sq(r.lifts);
    regrasps += static_cast<std::uint64_t>(r.regrasps);
    regrasps_sq += sq(r.regrasps);
  }
  return {episodes, successes, capped, transfers, transfers_sq, lifts, lifts_sq, regrasps, regrasps_sq};
}

AggregateReport summarize(const EpisodeTotals& t) {
  if (t.episodes == 0) throw ValidationError("no episodes to summarize");
  const double n = static_cast<double>(t.episodes);
  const auto metric = [&](std::uint64_t sum, std::uint64_t sum_sq) {
    const double mean = static_cast<double>(sum) / n;
    if (t.episodes < 2) return MetricSummary{mean, 0.0};
    const double s = static_cast<double>(sum);
    const double var = std::max(0.0, (static_cast<double>(sum_sq) - s * s / n) / (n - 1.0));
    return MetricSummary{mean, std::sqrt(var / n)};
  };
  AggregateReport r;
  r.episodes = t.episodes;
  r.transfers = metric(t.transfers, t.transfers_sq);
  r.lifts = metric(t.lifts, t.lifts_sq);
  r.regrasps = metric(t.regrasps, t.regrasps_sq);
  r.success_rate = static_cast<double>(t.successes) / n;
  r.capped_episodes = t.capped;
  return r;
}

AggregateReport monte_carlo(const mdp::Policy& policy, int target_n, const EnvironmentConfig& env,
                            std::size_t episodes, std::uint64_t seed, Execution execution) {
  if (episodes == 0) throw ValidationError("episodes must be >= 1");
  return summarize(execution == Execution::Serial ? run_episodes_serial(policy, target_n, env, episodes, seed)
                                                  : run_episodes_omp(policy, target_n, env, episodes, seed));
}

}  // namespace mogt::sim
