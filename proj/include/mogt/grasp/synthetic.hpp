#pragma once

#include <cstdint>
#include <span>
#include <optional>
#include <vector>

#include "mogt/grasp/trial_log.hpp"
#include "mogt/outcome_distribution.hpp"

namespace mogt::grasp {

/// Box of finger angles at one spread whose pre-grasps draw from `distribution`.
struct PlantedRegion {
  double spread_deg = 0.0;
  double left_min = 30.0;
  double left_max = 90.0;
  double right_min = 30.0;
  double right_max = 90.0;
  OutcomeDistribution distribution;

  bool contains(const PreGrasp& p) const noexcept;
};

/// End configurations are the pre-grasp joints plus one mode's offset, picked by weight.
struct EndGraspMode {
  JointVector offset_deg{};
  double weight = 1.0;
};

struct SyntheticTrialSpec {
  double spread_step_deg = 60.0;
  double finger_step_deg = 10.0;
  GridBounds bounds;
  std::size_t trials_per_pregrasp = 10;
  int m_max = kDefaultMaxObjects;
  OutcomeDistribution background = OutcomeDistribution({0.3, 0.3, 0.15, 0.15, 0.1});
  std::optional<PlantedRegion> planted;
  std::vector<EndGraspMode> end_modes = {EndGraspMode{{0.0, 20.0, 20.0}, 1.0}};
  /// Half-width of the uniform jitter added to every end-configuration angle.
  double end_jitter_deg = 1.0;
};

/// Trials over the full pre-grasp grid, deterministic in (spec, seed).
TrialSet generate_synthetic_trials(const SyntheticTrialSpec& spec, std::uint64_t seed);

}  // namespace mogt::grasp
