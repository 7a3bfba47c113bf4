#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mogt/grasp/statistics.hpp"
#include "mogt/mdp/reward.hpp"
#include "mogt/mdp/transfer_mdp.hpp"
#include "mogt/mdp/value_iteration.hpp"
#include "mogt/sim/environment.hpp"

namespace mogt::app {

inline constexpr int kConfigSchemaVersion = 1;

/// Outcome distribution estimated from one pre-grasp's records in a trial log.
struct TrialSource {
  std::filesystem::path file;
  std::string pregrasp;
  grasp::Smoothing smoothing = grasp::Smoothing::None;
  int m_max = 5;
};

struct ActionSpec {
  std::string id;
  /// nullopt marks the maximum-capacity grasp.
  std::optional<int> quantity;
  std::optional<sim::Estimator> estimator;
  /// Exactly one of these is set.
  std::optional<OutcomeDistribution> distribution;
  std::optional<TrialSource> trials;
};

/// One experiment: the task, the actions, the planner and the simulated world.
/// See configs/table3.yaml for the annotated schema.
struct ExperimentConfig {
  int target_n = 0;
  std::vector<ActionSpec> actions;
  mdp::RewardParams reward;
  mdp::SolverConfig solver;
  mdp::OvershootMode overshoot = mdp::OvershootMode::Reject;
  /// Everything about the simulated world except the actions.
  sim::EnvironmentConfig environment;
  std::size_t episodes = 10000;
  std::optional<std::uint64_t> seed;
  /// Hand capacity for the naive policy; defaults to the grasp-max support.
  std::optional<int> capacity;
  /// Relative trial-log paths resolve against this directory.
  std::filesystem::path base_dir;
};

/// Throws ParseError (with the line) for malformed YAML, unknown keys or
/// wrongly typed values and ValidationError for values out of range.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// The environment with every action resolved, trial logs loaded.
sim::EnvironmentConfig build_environment(const ExperimentConfig& config);

}  // namespace mogt::app
