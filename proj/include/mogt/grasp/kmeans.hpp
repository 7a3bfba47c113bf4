#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mogt/execution.hpp"
#include "mogt/grasp/pregrasp.hpp"

namespace mogt::grasp {

struct KMeansOptions {
  std::size_t max_iterations = 300;
  Execution execution = Execution::Parallel;
};

struct ClusterResult {
  std::vector<JointVector> centroids;
  /// Centroid index per input point; always the nearest centroid (lowest index on ties).
  std::vector<std::size_t> assignment;
  std::vector<std::size_t> sizes;
  /// Sum of squared distances from points to their assigned centroid.
  double inertia = 0.0;
  /// Mean squared point-to-centroid distance (inertia / number of points).
  double distortion = 0.0;
  std::size_t k = 0;
  std::size_t iterations = 0;
  /// Inertia after each assignment step, in order.
  std::vector<double> inertia_history;
};

/// Lloyd's algorithm with greedy farthest-point seeding. The first centre is
/// the point picked by `seed`; each next centre is the point farthest from the
/// centres chosen so far (lowest index on ties). Stops at an assignment
/// fixpoint or after max_iterations, then re-assigns against the final centres.
///
/// Throws ValidationError when k == 0 or k exceeds the number of distinct points.
ClusterResult kmeans(std::span<const JointVector> points, std::size_t k, std::uint64_t seed,
                     const KMeansOptions& options = {});

/// Nearest-centroid assignment of every point. Returns the inertia.
double assign_points_serial(std::span<const JointVector> points, std::span<const JointVector> centroids,
                            std::span<std::size_t> assignment);
double assign_points_omp(std::span<const JointVector> points, std::span<const JointVector> centroids,
                         std::span<std::size_t> assignment);

std::size_t count_distinct(std::span<const JointVector> points);

/// Picks the k where the inertia curve bends hardest: the largest second
/// difference I(k-1) - 2 I(k) + I(k+1) over interior keys, ties to the smaller
/// k. If no interior point bends (all second differences <= 0 up to rounding),
/// returns the smallest key. Keys must be consecutive; throws ValidationError
/// for fewer than three entries.
std::size_t elbow_select_k(const std::map<std::size_t, double>& inertia_by_k);

/// k-means for k = 1..k_max with the elbow choice.
struct ElbowScan {
  std::map<std::size_t, double> inertia_by_k;
  std::map<std::size_t, double> distortion_by_k;
  std::size_t chosen_k = 0;
  ClusterResult chosen;
};

/// k_max is capped at the number of distinct points. With fewer than three
/// candidate k values the largest available k is used.
ElbowScan cluster_with_elbow(std::span<const JointVector> points, std::size_t k_max, std::uint64_t seed,
                             const KMeansOptions& options = {});

}  // namespace mogt::grasp
