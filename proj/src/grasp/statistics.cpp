#include "mogt/grasp/statistics.hpp"

#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::grasp {

namespace {

std::vector<std::size_t> count_outcomes(std::span<const GraspTrial> trials, int m_max, const char* what) {
  if (trials.empty()) throw ValidationError(fmt::format("{}: no trials", what));
  if (m_max < 0) throw ValidationError("m_max must be non-negative");
  std::vector<std::size_t> counts(static_cast<std::size_t>(m_max) + 1, 0);
  for (const auto& t : trials) {
    if (t.outcome_count < 0 || t.outcome_count > m_max) {
      throw ValidationError(fmt::format("{}: outcome {} outside [0, {}]", what, t.outcome_count, m_max));
    }
    ++counts[static_cast<std::size_t>(t.outcome_count)];
  }
  return counts;
}

}  // namespace

OutcomeDistribution compute_ppg(std::span<const GraspTrial> trials, int m_max) {
  const auto counts = count_outcomes(trials, m_max, "ppg");
  for (const auto& t : trials) {
    if (t.pregrasp_id != trials.front().pregrasp_id) {
      throw ValidationError(fmt::format("ppg: trials mix pre-grasps '{}' and '{}'", trials.front().pregrasp_id,
                                        t.pregrasp_id));
    }
  }
  return OutcomeDistribution::from_counts(counts);
}

double compute_agp(const OutcomeDistribution& ppg) { return ppg.mean(); }

OutcomeDistribution compute_srg(std::span<const GraspTrial> trials, int m_max) {
  return OutcomeDistribution::from_counts(count_outcomes(trials, m_max, "srg"));
}

Smoothing parse_smoothing(std::string_view text) {
  if (text == "none") return Smoothing::None;
  if (text == "add_one") return Smoothing::AddOne;
  throw ValidationError(fmt::format("unknown smoothing '{}' (expected none or add_one)", text));
}

OutcomeDistribution estimate_distribution(std::span<const GraspTrial> trials, int m_max, Smoothing smoothing) {
  auto counts = count_outcomes(trials, m_max, "estimate");
  if (smoothing == Smoothing::AddOne) {
    for (auto& c : counts) ++c;
  }
  return OutcomeDistribution::from_counts(counts);
}

double Criterion::score(const OutcomeDistribution& ppg) const {
  return kind == Kind::Agp ? compute_agp(ppg) : ppg[static_cast<std::size_t>(quantity)];
}

std::vector<PreGraspStats> pregrasp_statistics(const TrialSet& set) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < set.pregrasps.size(); ++i) index.emplace(set.pregrasps[i].id, i);

  std::vector<std::vector<GraspTrial>> grouped(set.pregrasps.size());
  for (const auto& t : set.trials) {
    const auto it = index.find(t.pregrasp_id);
    if (it == index.end()) throw ValidationError(fmt::format("trial references unknown pre-grasp '{}'", t.pregrasp_id));
    grouped[it->second].push_back(t);
  }

  std::vector<PreGraspStats> stats;
  for (std::size_t i = 0; i < set.pregrasps.size(); ++i) {
    if (grouped[i].empty()) continue;
    stats.push_back({&set.pregrasps[i], compute_ppg(grouped[i], set.m_max), grouped[i].size()});
  }
  return stats;
}

SpreadSelection select_best_spread(const TrialSet& set, const Criterion& criterion) {
  const auto stats = pregrasp_statistics(set);
  if (stats.empty()) throw ValidationError("select_best_spread: no trials");

  std::map<double, std::pair<double, std::size_t>> by_spread;
  for (const auto& s : stats) {
    auto& [sum, count] = by_spread[s.pregrasp->spread_deg];
    sum += criterion.score(s.ppg);
    ++count;
  }

  SpreadSelection selection;
  double best = 0.0;
  for (const auto& [spread, acc] : by_spread) {
    const double mean = acc.first / static_cast<double>(acc.second);
    selection.scores.push_back({spread, mean, acc.second});
    if (selection.scores.size() == 1 || mean > best + 1e-12) {
      best = mean;
      selection.spread_deg = spread;
    }
  }
  return selection;
}

}  // namespace mogt::grasp
