#pragma once

#include <array>
#include <span>

namespace mogt::grasp {

using Vec3 = std::array<double, 3>;

/// Volume of the convex hull of a 3-D point set. Enumerates supporting planes
/// through point triples, takes the 2-D hull of each facet's points, and sums
/// the cones from an interior point. Coplanar, collinear or tiny sets give 0.
/// Intended for small sets (tens of points).
double convex_hull_volume(std::span<const Vec3> points);

}  // namespace mogt::grasp
