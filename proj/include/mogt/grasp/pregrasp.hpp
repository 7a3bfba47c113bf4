#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace mogt::grasp {

/// Joints of the simplified hand: spread, left finger group base, right finger base (degrees).
inline constexpr std::size_t kHandDof = 3;
using JointVector = std::array<double, kHandDof>;

/// Bounds of the sampled pre-grasp space.
struct GridBounds {
  double spread_min = 0.0;
  double spread_max = 360.0;
  double finger_min = 30.0;
  double finger_max = 90.0;
};

/// Ready-hand configuration that seeds a grasp attempt.
struct PreGrasp {
  std::string id;
  double spread_deg = 0.0;
  double finger_left_deg = 30.0;
  double finger_right_deg = 30.0;

  JointVector joints() const noexcept { return {spread_deg, finger_left_deg, finger_right_deg}; }

  /// Throws ValidationError when an angle is outside the grid bounds.
  void validate(const GridBounds& bounds = {}) const;

  friend bool operator==(const PreGrasp&, const PreGrasp&) = default;
};

/// Grasped object geometry. Only spheres are modeled.
struct ObjectSpec {
  double radius_m = 0.02;
  double mass_kg = 0.0027;

  void validate() const;
};

/// Cartesian grid over spread x left x right, both endpoints included,
/// spread-major ordering. Ids are "pg" plus a zero-padded index.
/// Throws ValidationError for non-positive steps or steps that do not divide the ranges.
std::vector<PreGrasp> generate_pregrasp_grid(double spread_step_deg, double finger_step_deg,
                                             const GridBounds& bounds = {});

double squared_distance(const JointVector& a, const JointVector& b) noexcept;

}  // namespace mogt::grasp
