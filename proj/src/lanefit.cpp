#include "lanedet/lanefit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "lanedet/error.hpp"

namespace lanedet {

Eigen::Vector3d lookup3D(const PointGrid& grid, const Eigen::Vector2d& pixel) {
  if (!(pixel.x() >= -0.5 && pixel.y() >= -0.5 && pixel.x() < grid.width() - 0.5 &&
        pixel.y() < grid.height() - 0.5))
    throw InputError("pixel outside the point grid");

  const int cx = static_cast<int>(std::lround(pixel.x()));
  const int cy = static_cast<int>(std::lround(pixel.y()));
  int best = -1;
  int bestX = 0, bestY = 0;
  // Row-major scan with strict improvement keeps the (row, column) tie order.
  for (int y = cy - 3; y <= cy + 3; ++y) {
    for (int x = cx - 3; x <= cx + 3; ++x) {
      if (!grid.points.contains(x, y) || !grid.valid(x, y)) continue;
      const int d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      if (best < 0 || d2 < best) {
        best = d2;
        bestX = x;
        bestY = y;
      }
    }
  }
  if (best < 0) throw DepthGapError("no valid depth near pixel (" + std::to_string(cx) + ", " + std::to_string(cy) + ")");
  return grid.points(bestX, bestY);
}

LanePlane planeFromPoints(const Eigen::Vector3d& a1, const Eigen::Vector3d& b, const Eigen::Vector3d& a2) {
  Eigen::Vector3d n = (b - a1).cross(a2 - a1);
  const double len = n.norm();
  if (!(len > 1e-9)) throw DegeneratePlaneError("plane points are collinear");
  n /= len;
  if (n.y() < 0) n = -n;
  LanePlane plane;
  plane.normal = n;
  plane.point = a1;
  return plane;
}

LanePlane fitPlane(const PointGrid& grid, const Eigen::Vector2d& leftPeak, const Eigen::Vector2d& rightPeak,
                   const Eigen::Vector2d& rightFar) {
  if (leftPeak == rightPeak || leftPeak == rightFar || rightPeak == rightFar)
    throw DegeneratePlaneError("plane pixels must be distinct");
  LanePlane plane = planeFromPoints(lookup3D(grid, leftPeak), lookup3D(grid, rightPeak), lookup3D(grid, rightFar));
  plane.sourcePixels = {leftPeak, rightPeak, rightFar};
  return plane;
}

std::string formatPlane(const LanePlane& plane) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.9f %.9f %.9f %.9f %.9f %.9f", plane.normal.x(), plane.normal.y(),
                plane.normal.z(), plane.point.x(), plane.point.y(), plane.point.z());
  return buf;
}

LanePlane parsePlane(std::string_view line) {
  std::istringstream in{std::string(line)};
  LanePlane plane;
  double v[6];
  for (double& x : v)
    if (!(in >> x)) throw FormatError("plane line must hold six numbers");
  plane.normal = {v[0], v[1], v[2]};
  plane.point = {v[3], v[4], v[5]};
  const double len = plane.normal.norm();
  if (!(len > 0)) throw FormatError("plane normal is zero");
  plane.normal /= len;
  return plane;
}

double normalAngleDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d u = a.normalized(), v = b.normalized();
  return std::atan2(u.cross(v).norm(), std::abs(u.dot(v))) * 180.0 / std::numbers::pi;
}

}  // namespace lanedet
