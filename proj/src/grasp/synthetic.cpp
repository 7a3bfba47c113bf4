#include "mogt/grasp/synthetic.hpp"

#include <fmt/format.h>

#include "mogt/errors.hpp"
#include "mogt/rng.hpp"

namespace mogt::grasp {

bool PlantedRegion::contains(const PreGrasp& p) const noexcept {
  return p.spread_deg == spread_deg && p.finger_left_deg >= left_min && p.finger_left_deg <= left_max &&
         p.finger_right_deg >= right_min && p.finger_right_deg <= right_max;
}

namespace {

std::size_t draw_index(Rng& rng, std::span<const double> weights, double total) {
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding can leave u just past the last bucket.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return 0;
}

}  // namespace

TrialSet generate_synthetic_trials(const SyntheticTrialSpec& spec, std::uint64_t seed) {
  if (spec.trials_per_pregrasp == 0) throw ValidationError("trials_per_pregrasp must be >= 1");
  if (spec.end_modes.empty()) throw ValidationError("at least one end-grasp mode is required");
  const auto check_fits = [&](const OutcomeDistribution& d, const char* what) {
    if (d.max_count() > static_cast<std::size_t>(spec.m_max)) {
      throw ValidationError(fmt::format("{} distribution exceeds m_max = {}", what, spec.m_max));
    }
  };
  check_fits(spec.background, "background");
  if (spec.planted) check_fits(spec.planted->distribution, "planted");

  std::vector<double> mode_weights;
  double mode_total = 0.0;
  for (const auto& m : spec.end_modes) {
    if (!(m.weight >= 0.0)) throw ValidationError("end-grasp mode weights must be non-negative");
    mode_weights.push_back(m.weight);
    mode_total += m.weight;
  }
  if (!(mode_total > 0.0)) throw ValidationError("end-grasp mode weights sum to zero");

  TrialSet set;
  set.m_max = spec.m_max;
  set.pregrasps = generate_pregrasp_grid(spec.spread_step_deg, spec.finger_step_deg, spec.bounds);
  Rng rng(seed);
  for (const auto& p : set.pregrasps) {
    const auto& dist = spec.planted && spec.planted->contains(p) ? spec.planted->distribution : spec.background;
    for (std::size_t t = 0; t < spec.trials_per_pregrasp; ++t) {
      const int outcome = static_cast<int>(draw_index(rng, dist.probs(), 1.0));
      const auto& mode = spec.end_modes[draw_index(rng, mode_weights, mode_total)];
      JointVector end = p.joints();
      for (std::size_t d = 0; d < kHandDof; ++d) {
        end[d] += mode.offset_deg[d] + spec.end_jitter_deg * (2.0 * rng.uniform01() - 1.0);
      }
      set.trials.push_back({p.id, end, outcome});
    }
  }
  return set;
}

}  // namespace mogt::grasp
