#pragma once

#include <span>
#include <vector>

#include "mogt/execution.hpp"
#include "mogt/grasp/hull.hpp"
#include "mogt/grasp/pregrasp.hpp"

namespace mogt::grasp {

/// Simplified three-finger hand used for the in-grasp volume proxy (millimetres).
/// One finger sits on the right of the palm and closes toward the left; the two
/// left fingers rotate about the palm normal by +/- spread/2 and start out
/// closing toward the right. Finger base angles are measured from the palm
/// normal, so larger angles mean a more closed hand. The distal link bends a
/// further distal_coupling * base angle.
struct HandGeometry {
  double palm_radius_mm = 25.0;
  double proximal_mm = 70.0;
  double distal_mm = 56.0;
  double distal_coupling = 1.0 / 3.0;
  int palm_points = 8;

  void validate() const;
};

/// Palm rim points plus the proximal and distal link endpoints of each finger.
std::vector<Vec3> hand_point_set(const JointVector& joints, const HandGeometry& hand);

double in_grasp_volume(const PreGrasp& pregrasp, const HandGeometry& hand);

/// Volume of every pre-grasp, in input order.
std::vector<double> pregrasp_volumes_serial(std::span<const PreGrasp> pregrasps, const HandGeometry& hand);
std::vector<double> pregrasp_volumes_omp(std::span<const PreGrasp> pregrasps, const HandGeometry& hand);

struct McpgSelection {
  PreGrasp pregrasp;
  double volume = 0.0;
  std::vector<double> volumes;
};

/// The pre-grasp with the largest in-grasp volume; ties go to the lower id.
/// Throws ValidationError on an empty list.
McpgSelection select_mcpg(std::span<const PreGrasp> pregrasps, const HandGeometry& hand = {},
                          Execution execution = Execution::Parallel);

}  // namespace mogt::grasp
