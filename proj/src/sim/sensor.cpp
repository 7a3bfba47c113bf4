#include "mogt/sim/sensor.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::sim {

namespace {

constexpr std::array<std::string_view, kEstimatorCount> kNames = {"nonzero", "one", "two", "three", "geq2"};

}  // namespace

std::string_view to_string(Estimator e) { return kNames[static_cast<std::size_t>(e)]; }

Estimator parse_estimator(std::string_view text) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (text == kNames[i]) return static_cast<Estimator>(i);
  }
  throw ValidationError(fmt::format("unknown estimator '{}' (expected nonzero, one, two, three or geq2)", text));
}

bool estimator_matches(Estimator e, int count) noexcept {
  switch (e) {
    case Estimator::NonZero: return count > 0;
    case Estimator::One: return count == 1;
    case Estimator::Two: return count == 2;
    case Estimator::Three: return count == 3;
    case Estimator::Geq2: return count >= 2;
  }
  return false;
}

Estimator default_target_estimator(std::optional<int> target_quantity) noexcept {
  if (target_quantity == 1) return Estimator::One;
  if (target_quantity == 2) return Estimator::Two;
  if (target_quantity == 3) return Estimator::Three;
  return Estimator::Geq2;
}

double SensorModel::fire_probability(Estimator e, int count) const noexcept {
  const Rates& r = (*this)[e];
  return estimator_matches(e, count) ? r.true_positive_rate : r.false_positive_rate;
}

void SensorModel::validate() const {
  for (std::size_t i = 0; i < kEstimatorCount; ++i) {
    for (double p : {rates[i].true_positive_rate, rates[i].false_positive_rate}) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(fmt::format("sensor rate {} for estimator {} outside [0, 1]", p, kNames[i]));
      }
    }
  }
}

SensorModel SensorModel::perfect() {
  SensorModel s;
  s.rates.fill({1.0, 0.0});
  return s;
}

SensorModel SensorModel::from_precision(const std::array<double, kEstimatorCount>& precision) {
  SensorModel s;
  for (std::size_t i = 0; i < kEstimatorCount; ++i) s.rates[i] = {precision[i], 1.0 - precision[i]};
  s.validate();
  return s;
}

SensorModel SensorModel::simulation_preset() { return from_precision({0.951, 0.8597, 0.6718, 0.4095, 0.7897}); }

SensorModel SensorModel::real_preset() { return from_precision({0.9609, 0.5172, 0.5146, 0.3824, 0.8304}); }

SensorModel SensorModel::preset(std::string_view name) {
  if (name == "perfect") return perfect();
  if (name == "simulation") return simulation_preset();
  if (name == "real") return real_preset();
  throw ValidationError(fmt::format("unknown sensor preset '{}' (expected perfect, simulation or real)", name));
}

}  // namespace mogt::sim
