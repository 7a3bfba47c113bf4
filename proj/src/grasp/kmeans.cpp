#include "mogt/grasp/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <omp.h>

#include "mogt/errors.hpp"
#include "mogt/rng.hpp"

namespace mogt::grasp {

namespace {

inline std::pair<std::size_t, double> nearest(const JointVector& point, std::span<const JointVector> centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

}  // namespace

double assign_points_serial(std::span<const JointVector> points, std::span<const JointVector> centroids,
                            std::span<std::size_t> assignment) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [c, d] = nearest(points[i], centroids);
    assignment[i] = c;
    inertia += d;
  }
  return inertia;
}

double assign_points_omp(std::span<const JointVector> points, std::span<const JointVector> centroids,
                         std::span<std::size_t> assignment) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::vector<double> distance(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto [c, d] = nearest(points[static_cast<std::size_t>(i)], centroids);
    assignment[static_cast<std::size_t>(i)] = c;
    distance[static_cast<std::size_t>(i)] = d;
  }
  // Summed in index order so the result matches the serial kernel exactly.
  return std::accumulate(distance.begin(), distance.end(), 0.0);
}

std::size_t count_distinct(std::span<const JointVector> points) {
  std::vector<JointVector> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

ClusterResult kmeans(std::span<const JointVector> points, std::size_t k, std::uint64_t seed,
                     const KMeansOptions& options) {
  const std::size_t n = points.size();
  if (k == 0) throw ValidationError("kmeans: k must be >= 1");
  const std::size_t distinct = count_distinct(points);
  if (k > distinct) {
    throw ValidationError(fmt::format("kmeans: k = {} exceeds the {} distinct points", k, distinct));
  }
  const auto assign = options.execution == Execution::Serial ? assign_points_serial : assign_points_omp;

  ClusterResult result;
  result.k = k;

  // Farthest-point seeding.
  Rng rng(seed);
  const auto first = std::min(n - 1, static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n)));
  result.centroids.push_back(points[first]);
  std::vector<double> min_d(n);
  for (std::size_t i = 0; i < n; ++i) min_d[i] = squared_distance(points[i], points[first]);
  while (result.centroids.size() < k) {
    const auto far = static_cast<std::size_t>(std::max_element(min_d.begin(), min_d.end()) - min_d.begin());
    result.centroids.push_back(points[far]);
    for (std::size_t i = 0; i < n; ++i) min_d[i] = std::min(min_d[i], squared_distance(points[i], points[far]));
  }

  result.assignment.assign(n, 0);
  std::vector<std::size_t> previous;
  bool converged = false;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    result.inertia = assign(points, result.centroids, result.assignment);
    result.inertia_history.push_back(result.inertia);
    result.iterations = it + 1;
    if (result.assignment == previous) {
      converged = true;
      break;
    }
    previous = result.assignment;

    std::vector<JointVector> sums(k, JointVector{});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = result.assignment[i];
      for (std::size_t d = 0; d < kHandDof; ++d) sums[c][d] += points[i][d];
      ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // empty cluster keeps its centre
      for (std::size_t d = 0; d < kHandDof; ++d) {
        result.centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
  }
  if (!converged) {
    result.inertia = assign(points, result.centroids, result.assignment);
    result.inertia_history.push_back(result.inertia);
  }

  result.sizes.assign(k, 0);
  for (auto c : result.assignment) ++result.sizes[c];
  result.distortion = n > 0 ? result.inertia / static_cast<double>(n) : 0.0;
  return result;
}

std::size_t elbow_select_k(const std::map<std::size_t, double>& inertia_by_k) {
  if (inertia_by_k.size() < 3) {
    throw ValidationError(fmt::format("elbow selection needs at least 3 k values, got {}", inertia_by_k.size()));
  }
  std::vector<std::size_t> ks;
  std::vector<double> inertia;
  double scale = 0.0;
  for (const auto& [k, value] : inertia_by_k) {
    if (!ks.empty() && k != ks.back() + 1) {
      throw ValidationError(fmt::format("elbow selection needs consecutive k values; {} follows {}", k, ks.back()));
    }
    ks.push_back(k);
    inertia.push_back(value);
    scale = std::max(scale, std::abs(value));
  }

  const double tolerance = 1e-9 * scale;
  std::size_t best_k = ks.front();
  double best = tolerance;
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
    const double bend = inertia[i - 1] - 2.0 * inertia[i] + inertia[i + 1];
    if (bend > best) {
      best = bend;
      best_k = ks[i];
    }
  }
  return best_k;
}

ElbowScan cluster_with_elbow(std::span<const JointVector> points, std::size_t k_max, std::uint64_t seed,
                             const KMeansOptions& options) {
  if (points.empty()) throw ValidationError("cannot cluster an empty point set");
  const std::size_t top = std::min(std::max<std::size_t>(k_max, 1), count_distinct(points));

  ElbowScan scan;
  std::vector<ClusterResult> runs;
  for (std::size_t k = 1; k <= top; ++k) {
    runs.push_back(kmeans(points, k, seed, options));
    scan.inertia_by_k[k] = runs.back().inertia;
    scan.distortion_by_k[k] = runs.back().distortion;
  }
  scan.chosen_k = top < 3 ? top : elbow_select_k(scan.inertia_by_k);
  scan.chosen = std::move(runs[scan.chosen_k - 1]);
  return scan;
}

}  // namespace mogt::grasp
