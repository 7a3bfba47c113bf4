#include "mogt/grasp/hull.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace mogt::grasp {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

using Point2 = std::array<double, 2>;

double cross2(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain, then the shoelace formula.
double hull_area_2d(std::vector<Point2> pts) {
  if (pts.size() < 3) return 0.0;
  std::sort(pts.begin(), pts.end());
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  double twice = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return std::abs(twice) / 2.0;
}

}  // namespace

double convex_hull_volume(std::span<const Vec3> points) {
  const std::size_t n = points.size();
  if (n < 4) return 0.0;

  Vec3 lo = points[0];
  Vec3 hi = points[0];
  Vec3 centre{0.0, 0.0, 0.0};
  for (const auto& p : points) {
    for (std::size_t d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
      centre[d] += p[d] / static_cast<double>(n);
    }
  }
  const double extent = norm(sub(hi, lo));
  if (extent == 0.0) return 0.0;
  const double eps = 1e-9 * extent;

  std::set<std::vector<std::size_t>> seen;
  double volume = 0.0;
  std::vector<std::size_t> on_plane;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        Vec3 normal = cross(sub(points[j], points[i]), sub(points[k], points[i]));
        const double len = norm(normal);
        if (len <= 1e-12 * extent * extent) continue;  // collinear triple
        for (auto& c : normal) c /= len;
        const double offset = dot(normal, points[i]);

        bool above = false;
        bool below = false;
        on_plane.clear();
        for (std::size_t m = 0; m < n && !(above && below); ++m) {
          const double side = dot(normal, points[m]) - offset;
          if (side > eps) {
            above = true;
          } else if (side < -eps) {
            below = true;
          } else {
            on_plane.push_back(m);
          }
        }
        if (above && below) continue;
        if (!above && !below) return 0.0;  // every point lies in one plane
        if (!seen.insert(on_plane).second) continue;

        Vec3 u = sub(points[j], points[i]);
        const double ulen = norm(u);
        for (auto& c : u) c /= ulen;
        const Vec3 v = cross(normal, u);
        std::vector<Point2> projected;
        projected.reserve(on_plane.size());
        for (auto m : on_plane) {
          const Vec3 rel = sub(points[m], points[i]);
          projected.push_back({dot(rel, u), dot(rel, v)});
        }
        volume += hull_area_2d(std::move(projected)) * std::abs(dot(normal, centre) - offset) / 3.0;
      }
    }
  }
  return volume;
}

}  // namespace mogt::grasp
