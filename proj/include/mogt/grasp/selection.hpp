#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mogt/errors.hpp"
#include "mogt/grasp/kmeans.hpp"
#include "mogt/grasp/statistics.hpp"
#include "mogt/grasp/trial_log.hpp"

namespace mogt::grasp {

/// Which pre-grasps of the chosen spread survive into clustering.
struct FilterRule {
  /// Keep the best ceil(keep_fraction * count) pre-grasps by the criterion (at least one).
  double keep_fraction = 0.25;
  /// Additionally drop pre-grasps scoring below this, if set.
  std::optional<double> min_score;
};

struct SelectionOptions {
  FilterRule filter;
  std::size_t k_max = 8;
  std::uint64_t seed = 0;
  /// Trials used to score centroids; defaults to the input set itself.
  const TrialSet* evaluation = nullptr;
  KMeansOptions kmeans;
};

/// Raised when filtering leaves nothing to cluster; carries the threshold used.
class EmptySurvivorSet : public ValidationError {
 public:
  EmptySurvivorSet(const std::string& message, double threshold)
      : ValidationError(message), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

struct CentroidEvaluation {
  JointVector centroid{};
  std::size_t members = 0;
  /// Grid pre-grasp nearest to the centroid, whose trials stand in for it.
  std::string nearest_pregrasp;
  OutcomeDistribution ppg;
  double score = 0.0;
};

struct PreGraspSelection {
  PreGrasp pregrasp;
  OutcomeDistribution distribution;
  double agp = 0.0;
  double score = 0.0;
  Criterion criterion;
  SpreadSelection spread;
  std::size_t candidates = 0;
  std::size_t survivors = 0;
  /// Lowest score that survived filtering.
  double threshold = 0.0;
  ElbowScan clusters;
  std::vector<CentroidEvaluation> centroids;
  std::size_t chosen_centroid = 0;
};

/// Best spread for p_target, filter, cluster with elbow-chosen k, score each
/// centroid through its nearest grid pre-grasp, return the best (lowest
/// centroid index on ties).
PreGraspSelection select_cppg(const TrialSet& set, int target_q, const SelectionOptions& options);

/// Same pipeline ranked by AGP.
PreGraspSelection select_bepg(const TrialSet& set, const SelectionOptions& options);

/// Linear joint-space path from a pre-grasp to an end-grasp.
struct FlexionSynergy {
  PreGrasp pregrasp;
  JointVector end_grasp{};
  /// steps + 1 configurations; the first is the pre-grasp, the last the end-grasp.
  std::vector<JointVector> trajectory;
};

FlexionSynergy flexion_synergy(const PreGrasp& pregrasp, const JointVector& end_grasp, std::size_t steps = 20);

struct EndGraspSelection {
  PreGrasp pregrasp;
  int target_q = 0;
  /// Successful trials (outcome == target_q) that were clustered.
  std::size_t successful_trials = 0;
  ElbowScan clusters;
  std::size_t chosen_cluster = 0;
  /// Success-rate vector per cluster, over every trial of the pre-grasp
  /// assigned to its nearest centroid.
  std::vector<OutcomeDistribution> srg;
  FlexionSynergy synergy;
};

/// Clusters the end configurations of trials that reached target_q, picks the
/// most populated cluster (lowest index on ties) as the end-grasp and builds
/// the flexion synergy. Throws ValidationError when no trial reached target_q
/// or the pre-grasp is unknown.
EndGraspSelection select_end_grasp(const TrialSet& set, const std::string& pregrasp_id, int target_q,
                                   std::uint64_t seed, std::size_t k_max = 8, std::size_t steps = 20);

}  // namespace mogt::grasp
