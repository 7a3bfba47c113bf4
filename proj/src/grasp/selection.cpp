#include "mogt/grasp/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace mogt::grasp {

namespace {

PreGraspSelection run_pipeline(const TrialSet& set, const Criterion& criterion, const SelectionOptions& options) {
  const FilterRule& filter = options.filter;
  if (!(filter.keep_fraction > 0.0 && filter.keep_fraction <= 1.0)) {
    throw ValidationError(fmt::format("keep_fraction must be in (0, 1], got {}", filter.keep_fraction));
  }
  if (options.k_max < 1) throw ValidationError("k_max must be >= 1");

  PreGraspSelection out;
  out.criterion = criterion;
  out.spread = select_best_spread(set, criterion);

  const auto stats = pregrasp_statistics(set);
  std::vector<const PreGraspStats*> candidates;
  for (const auto& s : stats) {
    if (s.pregrasp->spread_deg == out.spread.spread_deg) candidates.push_back(&s);
  }
  out.candidates = candidates.size();
  std::stable_sort(candidates.begin(), candidates.end(), [&](const PreGraspStats* a, const PreGraspStats* b) {
    return criterion.score(a->ppg) > criterion.score(b->ppg);
  });

  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(filter.keep_fraction * static_cast<double>(candidates.size()) - 1e-9)));
  candidates.resize(std::min(keep, candidates.size()));
  if (filter.min_score) {
    std::erase_if(candidates, [&](const PreGraspStats* s) { return criterion.score(s->ppg) < *filter.min_score; });
  }
  if (candidates.empty()) {
    const double threshold = filter.min_score.value_or(0.0);
    throw EmptySurvivorSet(fmt::format("no pre-grasp at spread {} scores at least {}", out.spread.spread_deg, threshold),
                           threshold);
  }
  out.survivors = candidates.size();
  out.threshold = criterion.score(candidates.back()->ppg);

  std::vector<JointVector> points;
  points.reserve(candidates.size());
  for (const auto* s : candidates) points.push_back(s->pregrasp->joints());
  out.clusters = cluster_with_elbow(points, options.k_max, options.seed, options.kmeans);

  const TrialSet& evaluation = options.evaluation != nullptr ? *options.evaluation : set;
  const auto eval_stats = pregrasp_statistics(evaluation);
  if (eval_stats.empty()) throw ValidationError("evaluation trial set has no trials");

  const auto& chosen = out.clusters.chosen;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < chosen.centroids.size(); ++c) {
    const JointVector& centroid = chosen.centroids[c];
    std::size_t nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eval_stats.size(); ++i) {
      const double d = squared_distance(centroid, eval_stats[i].pregrasp->joints());
      if (d < nearest_d) {
        nearest_d = d;
        nearest = i;
      }
    }
    const auto& near = eval_stats[nearest];
    CentroidEvaluation eval{centroid, chosen.sizes[c], near.pregrasp->id, near.ppg, criterion.score(near.ppg)};
    if (eval.score > best) {
      best = eval.score;
      out.chosen_centroid = c;
      out.pregrasp = *near.pregrasp;
      out.distribution = near.ppg;
    }
    out.centroids.push_back(std::move(eval));
  }
  out.score = best;
  out.agp = compute_agp(out.distribution);
  return out;
}

}  // namespace

PreGraspSelection select_cppg(const TrialSet& set, int target_q, const SelectionOptions& options) {
  if (target_q < 1 || target_q > set.m_max) {
    throw ValidationError(fmt::format("target quantity {} outside [1, {}]", target_q, set.m_max));
  }
  return run_pipeline(set, Criterion::target_quantity(target_q), options);
}

PreGraspSelection select_bepg(const TrialSet& set, const SelectionOptions& options) {
  return run_pipeline(set, Criterion::agp(), options);
}

FlexionSynergy flexion_synergy(const PreGrasp& pregrasp, const JointVector& end_grasp, std::size_t steps) {
  if (steps < 1) throw ValidationError("synergy needs at least one step");
  FlexionSynergy synergy{pregrasp, end_grasp, {}};
  const JointVector start = pregrasp.joints();
  synergy.trajectory.reserve(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(steps);
    JointVector q{};
    for (std::size_t d = 0; d < kHandDof; ++d) q[d] = start[d] + t * (end_grasp[d] - start[d]);
    synergy.trajectory.push_back(q);
  }
  synergy.trajectory.push_back(end_grasp);
  return synergy;
}

EndGraspSelection select_end_grasp(const TrialSet& set, const std::string& pregrasp_id, int target_q,
                                   std::uint64_t seed, std::size_t k_max, std::size_t steps) {
  const PreGrasp* pregrasp = set.find_pregrasp(pregrasp_id);
  if (pregrasp == nullptr) throw ValidationError(fmt::format("unknown pre-grasp '{}'", pregrasp_id));
  if (target_q < 0 || target_q > set.m_max) {
    throw ValidationError(fmt::format("target quantity {} outside [0, {}]", target_q, set.m_max));
  }

  const auto trials = set.trials_for(pregrasp_id);
  std::vector<JointVector> points;
  for (const auto& t : trials) {
    if (t.outcome_count == target_q) points.push_back(t.end_config_deg);
  }
  if (points.empty()) {
    throw ValidationError(fmt::format("no trial of '{}' reached {} objects", pregrasp_id, target_q));
  }

  EndGraspSelection out;
  out.pregrasp = *pregrasp;
  out.target_q = target_q;
  out.successful_trials = points.size();
  out.clusters = cluster_with_elbow(points, k_max, seed);
  const auto& chosen = out.clusters.chosen;
  out.chosen_cluster = static_cast<std::size_t>(std::max_element(chosen.sizes.begin(), chosen.sizes.end()) -
                                                chosen.sizes.begin());

  std::vector<JointVector> all;
  all.reserve(trials.size());
  for (const auto& t : trials) all.push_back(t.end_config_deg);
  std::vector<std::size_t> assignment(all.size());
  assign_points_serial(all, chosen.centroids, assignment);
  std::vector<std::vector<GraspTrial>> grouped(chosen.k);
  for (std::size_t i = 0; i < trials.size(); ++i) grouped[assignment[i]].push_back(trials[i]);
  for (const auto& group : grouped) out.srg.push_back(compute_srg(group, set.m_max));

  out.synergy = flexion_synergy(*pregrasp, chosen.centroids[out.chosen_cluster], steps);
  return out;
}

}  // namespace mogt::grasp
