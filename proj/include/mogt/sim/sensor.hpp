#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace mogt::sim {

/// Per-timestep binary estimators watching the hand during a grasp attempt.
enum class Estimator { NonZero, One, Two, Three, Geq2 };
inline constexpr std::size_t kEstimatorCount = 5;

std::string_view to_string(Estimator e);
/// Accepts "nonzero", "one", "two", "three", "geq2".
Estimator parse_estimator(std::string_view text);

/// Whether the estimator's predicate holds for a true in-hand count.
bool estimator_matches(Estimator e, int count) noexcept;

/// Exact-count estimator for quantities 1..3, GEQ2 for anything larger.
Estimator default_target_estimator(std::optional<int> target_quantity) noexcept;

struct Rates {
  double true_positive_rate = 1.0;
  double false_positive_rate = 0.0;
  friend bool operator==(const Rates&, const Rates&) = default;
};

/// Independent Bernoulli stand-in for a learned in-hand classifier. An
/// estimator fires with its TPR when its predicate holds and with its FPR
/// otherwise.
struct SensorModel {
  std::array<Rates, kEstimatorCount> rates{};

  const Rates& operator[](Estimator e) const noexcept { return rates[static_cast<std::size_t>(e)]; }
  Rates& operator[](Estimator e) noexcept { return rates[static_cast<std::size_t>(e)]; }

  /// Probability the estimator fires at one timestep given the true count.
  double fire_probability(Estimator e, int count) const noexcept;

  /// Throws ValidationError for a rate outside [0, 1].
  void validate() const;

  /// TPR 1, FPR 0 everywhere.
  static SensorModel perfect();
  /// TPR = precision, FPR = 1 - precision, in NonZero, One, Two, Three, Geq2 order.
  static SensorModel from_precision(const std::array<double, kEstimatorCount>& precision);
  /// Precisions measured on simulated and on real grasp data for small spheres.
  static SensorModel simulation_preset();
  static SensorModel real_preset();
  /// "perfect", "simulation" or "real".
  static SensorModel preset(std::string_view name);

  friend bool operator==(const SensorModel&, const SensorModel&) = default;
};

}  // namespace mogt::sim
