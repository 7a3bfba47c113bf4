#include "mogt/grasp/pregrasp.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::grasp {

void PreGrasp::validate(const GridBounds& bounds) const {
  auto check = [&](double value, double lo, double hi, const char* name) {
    if (!(value >= lo && value <= hi)) {
      throw ValidationError(fmt::format("pre-grasp '{}': {} = {} outside [{}, {}]", id, name, value, lo, hi));
    }
  };
  check(spread_deg, bounds.spread_min, bounds.spread_max, "spread_deg");
  check(finger_left_deg, bounds.finger_min, bounds.finger_max, "finger_left_deg");
  check(finger_right_deg, bounds.finger_min, bounds.finger_max, "finger_right_deg");
}

void ObjectSpec::validate() const {
  if (!(radius_m > 0.0)) throw ValidationError("object radius must be positive");
  if (!(mass_kg > 0.0)) throw ValidationError("object mass must be positive");
}

namespace {

std::size_t steps_in_range(double lo, double hi, double step, const char* name) {
  if (!(step > 0.0)) {
    throw ValidationError(fmt::format("{} step must be positive, got {}", name, step));
  }
  const double ratio = (hi - lo) / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError(fmt::format("{} step {} does not divide the range [{}, {}]", name, step, lo, hi));
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

std::vector<PreGrasp> generate_pregrasp_grid(double spread_step_deg, double finger_step_deg,
                                             const GridBounds& bounds) {
  const std::size_t spread_steps = steps_in_range(bounds.spread_min, bounds.spread_max, spread_step_deg, "spread");
  const std::size_t finger_steps = steps_in_range(bounds.finger_min, bounds.finger_max, finger_step_deg, "finger");
  const std::size_t total = (spread_steps + 1) * (finger_steps + 1) * (finger_steps + 1);
  const std::size_t width = std::max<std::size_t>(5, fmt::format("{}", total - 1).size());

  std::vector<PreGrasp> grid;
  grid.reserve(total);
  for (std::size_t i = 0; i <= spread_steps; ++i) {
    for (std::size_t j = 0; j <= finger_steps; ++j) {
      for (std::size_t k = 0; k <= finger_steps; ++k) {
        grid.push_back({fmt::format("pg{:0{}}", grid.size(), width),
                        bounds.spread_min + static_cast<double>(i) * spread_step_deg,
                        bounds.finger_min + static_cast<double>(j) * finger_step_deg,
                        bounds.finger_min + static_cast<double>(k) * finger_step_deg});
      }
    }
  }
  return grid;
}

double squared_distance(const JointVector& a, const JointVector& b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < kHandDof; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace mogt::grasp
