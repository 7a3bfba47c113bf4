#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mogt/grasp/trial_log.hpp"
#include "mogt/outcome_distribution.hpp"

namespace mogt::grasp {

/// Per-pre-grasp outcome frequencies p_0..p_m_max. All trials must share one
/// pregrasp_id. Throws ValidationError on an empty list, mixed ids, or an
/// outcome above m_max.
OutcomeDistribution compute_ppg(std::span<const GraspTrial> trials, int m_max);

/// Expected object count, sum of i * p_i.
double compute_agp(const OutcomeDistribution& ppg);

/// Outcome frequencies of the trials grouped under one end-grasp cluster.
OutcomeDistribution compute_srg(std::span<const GraspTrial> trials, int m_max);

enum class Smoothing { None, AddOne };
Smoothing parse_smoothing(std::string_view text);

/// Transition-probability estimate for one action from its trials; AddOne adds
/// a pseudo-count to every outcome 0..m_max.
OutcomeDistribution estimate_distribution(std::span<const GraspTrial> trials, int m_max, Smoothing smoothing);

/// Statistic used to rank spreads and filter pre-grasps.
struct Criterion {
  enum class Kind { TargetQuantity, Agp };
  Kind kind = Kind::Agp;
  int quantity = 0;

  static Criterion target_quantity(int q) { return {Kind::TargetQuantity, q}; }
  static Criterion agp() { return {Kind::Agp, 0}; }

  /// p_quantity or the AGP of the distribution.
  double score(const OutcomeDistribution& ppg) const;
};

struct PreGraspStats {
  const PreGrasp* pregrasp = nullptr;
  OutcomeDistribution ppg;
  std::size_t trials = 0;
};

/// PPG of every pre-grasp in the set, in pre-grasp order. Pre-grasps without trials are skipped.
std::vector<PreGraspStats> pregrasp_statistics(const TrialSet& set);

struct SpreadScore {
  double spread_deg = 0.0;
  double mean_score = 0.0;
  std::size_t pregrasps = 0;
};

struct SpreadSelection {
  double spread_deg = 0.0;
  /// One entry per spread, ascending.
  std::vector<SpreadScore> scores;
};

/// Groups pre-grasps by spread and returns the spread with the highest mean
/// criterion score; ties go to the smaller spread. Throws ValidationError when
/// the set has no trials.
SpreadSelection select_best_spread(const TrialSet& set, const Criterion& criterion);

}  // namespace mogt::grasp
