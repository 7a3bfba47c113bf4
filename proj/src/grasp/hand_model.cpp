#include "mogt/grasp/hand_model.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mogt/errors.hpp"

namespace mogt::grasp {

void HandGeometry::validate() const {
  if (!(palm_radius_mm > 0.0)) throw ValidationError("palm radius must be positive");
  if (!(proximal_mm > 0.0) || !(distal_mm > 0.0)) throw ValidationError("finger link lengths must be positive");
  if (!(distal_coupling >= 0.0)) throw ValidationError("distal coupling must be non-negative");
  if (palm_points < 3) throw ValidationError(fmt::format("palm needs at least 3 points, got {}", palm_points));
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Planar two-link finger in the plane spanned by the closing direction and the palm normal.
void add_finger(std::vector<Vec3>& points, double base_azimuth_deg, double closing_azimuth_deg, double flexion_deg,
                const HandGeometry& hand) {
  const double a = base_azimuth_deg * kDegToRad;
  const double c = closing_azimuth_deg * kDegToRad;
  const Vec3 base{hand.palm_radius_mm * std::cos(a), hand.palm_radius_mm * std::sin(a), 0.0};
  const double ux = std::cos(c);
  const double uy = std::sin(c);

  const double t1 = flexion_deg * kDegToRad;
  const double t2 = t1 * (1.0 + hand.distal_coupling);
  const Vec3 p1{base[0] + hand.proximal_mm * std::sin(t1) * ux, base[1] + hand.proximal_mm * std::sin(t1) * uy,
                hand.proximal_mm * std::cos(t1)};
  const Vec3 p2{p1[0] + hand.distal_mm * std::sin(t2) * ux, p1[1] + hand.distal_mm * std::sin(t2) * uy,
                p1[2] + hand.distal_mm * std::cos(t2)};
  points.push_back(p1);
  points.push_back(p2);
}

}  // namespace

std::vector<Vec3> hand_point_set(const JointVector& joints, const HandGeometry& hand) {
  hand.validate();
  const double spread = joints[0];
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(hand.palm_points) + 6);
  for (int i = 0; i < hand.palm_points; ++i) {
    const double a = 2.0 * std::numbers::pi * i / hand.palm_points;
    points.push_back({hand.palm_radius_mm * std::cos(a), hand.palm_radius_mm * std::sin(a), 0.0});
  }
  add_finger(points, 180.0 - 45.0, spread / 2.0, joints[1], hand);
  add_finger(points, 180.0 + 45.0, -spread / 2.0, joints[1], hand);
  add_finger(points, 0.0, 180.0, joints[2], hand);
  return points;
}

double in_grasp_volume(const PreGrasp& pregrasp, const HandGeometry& hand) {
  const auto points = hand_point_set(pregrasp.joints(), hand);
  return convex_hull_volume(points);
}

std::vector<double> pregrasp_volumes_serial(std::span<const PreGrasp> pregrasps, const HandGeometry& hand) {
  std::vector<double> volumes(pregrasps.size());
  for (std::size_t i = 0; i < pregrasps.size(); ++i) volumes[i] = in_grasp_volume(pregrasps[i], hand);
  return volumes;
}

std::vector<double> pregrasp_volumes_omp(std::span<const PreGrasp> pregrasps, const HandGeometry& hand) {
  hand.validate();
  std::vector<double> volumes(pregrasps.size());
  const auto n = static_cast<std::ptrdiff_t>(pregrasps.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    volumes[static_cast<std::size_t>(i)] = in_grasp_volume(pregrasps[static_cast<std::size_t>(i)], hand);
  }
  return volumes;
}

McpgSelection select_mcpg(std::span<const PreGrasp> pregrasps, const HandGeometry& hand, Execution execution) {
  if (pregrasps.empty()) throw ValidationError("select_mcpg: no pre-grasps");
  McpgSelection result;
  result.volumes = execution == Execution::Serial ? pregrasp_volumes_serial(pregrasps, hand)
                                                  : pregrasp_volumes_omp(pregrasps, hand);
  std::size_t best = 0;
  for (std::size_t i = 1; i < pregrasps.size(); ++i) {
    const double v = result.volumes[i];
    const double b = result.volumes[best];
    if (v > b || (v == b && pregrasps[i].id < pregrasps[best].id)) best = i;
  }
  result.pregrasp = pregrasps[best];
  result.volume = result.volumes[best];
  return result;
}

}  // namespace mogt::grasp
