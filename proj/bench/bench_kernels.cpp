// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "mogt/grasp/hand_model.hpp"
#include "mogt/grasp/kmeans.hpp"
#include "mogt/grasp/pregrasp.hpp"
#include "mogt/mdp/bellman_kernels.hpp"
#include "mogt/mdp/transfer_mdp.hpp"
#include "mogt/sim/monte_carlo.hpp"
#include "mogt/sim/policies.hpp"

namespace {

using namespace mogt;

OutcomeDistribution spread_out(std::size_t max_count, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<double> p(max_count + 1);
  double total = 0.0;
  for (auto& x : p) total += (x = w(gen));
  double rest = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) rest += (p[i] /= total);
  p[0] = 1.0 - rest;
  return OutcomeDistribution(std::move(p));
}

// ---- Bellman sweep ----

mdp::TransferMdp bellman_mdp(int n) {
  std::mt19937_64 gen(1);
  std::vector<GraspAction> actions;
  for (int q = 1; q <= 8; ++q) actions.push_back({grasp_action_id(q), q, spread_out(12, gen)});
  actions.push_back({"grasp-max", std::nullopt, spread_out(16, gen)});
  mdp::RewardParams params;
  params.target_n = n;
  return mdp::TransferMdp::build(actions, params);
}

template <auto Sweep>
void BM_Bellman(benchmark::State& state) {
  const auto model = bellman_mdp(static_cast<int>(state.range(0)));
  std::vector<double> current(model.num_states(), 1.0), next(model.num_states());
  std::vector<std::size_t> best(model.num_states());
  for (auto _ : state) {
    benchmark::DoNotOptimize(Sweep(model, 0.95, current, next, best));
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bellman<mdp::bellman_sweep_serial>)->Name("bellman/serial")->Arg(1000)->Arg(20000);
BENCHMARK(BM_Bellman<mdp::bellman_sweep_omp>)->Name("bellman/omp")->Arg(1000)->Arg(20000);

// ---- k-means assignment ----

template <auto Assign>
void BM_Assign(benchmark::State& state) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> angle(0.0, 360.0);
  std::vector<grasp::JointVector> points(static_cast<std::size_t>(state.range(0)));
  for (auto& p : points) p = {angle(gen), angle(gen), angle(gen)};
  std::vector<grasp::JointVector> centroids(points.begin(), points.begin() + 8);
  std::vector<std::size_t> assignment(points.size());
  for (auto _ : state) benchmark::DoNotOptimize(Assign(points, centroids, assignment));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Assign<grasp::assign_points_serial>)->Name("kmeans_assign/serial")->Arg(10000)->Arg(200000);
BENCHMARK(BM_Assign<grasp::assign_points_omp>)->Name("kmeans_assign/omp")->Arg(10000)->Arg(200000);

// ---- in-grasp volumes over a pre-grasp grid ----

template <auto Volumes>
void BM_Volumes(benchmark::State& state) {
  const auto grid = grasp::generate_pregrasp_grid(60.0, 10.0);
  const grasp::HandGeometry hand;
  for (auto _ : state) benchmark::DoNotOptimize(Volumes(grid, hand));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}
BENCHMARK(BM_Volumes<grasp::pregrasp_volumes_serial>)->Name("hull_volumes/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Volumes<grasp::pregrasp_volumes_omp>)->Name("hull_volumes/omp")->Unit(benchmark::kMillisecond);

// ---- Monte Carlo episodes ----

template <auto Run>
void BM_Episodes(benchmark::State& state) {
  sim::EnvironmentConfig env;
  env.actions.push_back(sim::make_action_model({"grasp-max", std::nullopt,
                                                OutcomeDistribution({0.06, 0.16, 0.16, 0.42, 0.20})}));
  env.actions.push_back(sim::make_action_model({"grasp-1", 1, OutcomeDistribution({0.2, 0.6, 0.2})}));
  env.actions.push_back(sim::make_action_model({"grasp-2", 2, OutcomeDistribution({0.0, 0.2, 0.6, 0.2})}));
  env.actions.push_back(sim::make_action_model({"grasp-3", 3, OutcomeDistribution({0.0, 0.0, 0.2, 0.6, 0.2})}));
  env.sensor = sim::SensorModel::simulation_preset();
  const auto policy = sim::naive_policy_table(10, env, 4);
  const auto episodes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Run(policy, 10, env, episodes, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Episodes<sim::run_episodes_serial>)->Name("episodes/serial")->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Episodes<sim::run_episodes_omp>)->Name("episodes/omp")->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
