#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "lanedet/preprocess.hpp"

namespace lanedet {

/// Road plane through three detected marker points.
struct LanePlane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitY();  ///< unit, camera-down (y) component >= 0
  Eigen::Vector3d point = Eigen::Vector3d::Zero();    ///< v_a1, meters
  std::array<Eigen::Vector2d, 3> sourcePixels{};       ///< v_a1, v_b, v_a2

  /// Signed distance of `p` from the plane along the normal.
  double distance(const Eigen::Vector3d& p) const { return normal.dot(p - point); }
};

/// Grid point at the valid pixel nearest to `pixel` within the surrounding 7x7 block.
/// Ties go to the smaller row, then column. Throws DepthGapError when none is valid
/// and InputError when `pixel` lies outside the grid.
Eigen::Vector3d lookup3D(const PointGrid& grid, const Eigen::Vector2d& pixel);

/// Plane with normal (b - a1) x (a2 - a1), normalized and flipped to y >= 0, through a1.
/// Throws DegeneratePlaneError when the points are collinear.
LanePlane planeFromPoints(const Eigen::Vector3d& a1, const Eigen::Vector3d& b, const Eigen::Vector3d& a2);

/// Lifts the left peak (v_a1), right peak (v_b) and far right-chain center (v_a2)
/// into 3D and fits the plane through them.
LanePlane fitPlane(const PointGrid& grid, const Eigen::Vector2d& leftPeak, const Eigen::Vector2d& rightPeak,
                   const Eigen::Vector2d& rightFar);

/// `nx ny nz px py pz`
std::string formatPlane(const LanePlane& plane);
LanePlane parsePlane(std::string_view line);

/// Angle between two plane normals in degrees, ignoring orientation.
double normalAngleDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

}  // namespace lanedet
