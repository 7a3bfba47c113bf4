#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mogt {

inline constexpr double kNormalizationTolerance = 1e-9;

/// Probabilities p_0..p_m of ending a grasp attempt holding 0..m objects.
///
/// Construction validates: at least one entry, every entry in [0, 1], and the
/// entries sum to 1 within kNormalizationTolerance. The stored vector is kept
/// as given (no renormalization), so hand-entered tables round-trip exactly.
class OutcomeDistribution {
 public:
  OutcomeDistribution() : probs_{1.0} {}
  explicit OutcomeDistribution(std::vector<double> probs);

  static OutcomeDistribution point_mass(std::size_t count);
  /// Empirical frequencies; counts must not all be zero.
  static OutcomeDistribution from_counts(std::span<const std::size_t> counts);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::size_t max_count() const noexcept { return probs_.size() - 1; }

  /// p_i, or 0 past the last stored entry.
  double operator[](std::size_t i) const noexcept { return i < probs_.size() ? probs_[i] : 0.0; }

  /// Expected object count, sum of i * p_i.
  double mean() const noexcept;

  /// Same distribution padded with zeros (or trimmed of trailing zeros) to max_count.
  OutcomeDistribution resized(std::size_t max_count) const;

  std::string to_string() const;

  friend bool operator==(const OutcomeDistribution&, const OutcomeDistribution&) = default;

 private:
  std::vector<double> probs_;
};

}  // namespace mogt
