#pragma once

#include <array>

#include <Eigen/Core>

#include "lanedet/image.hpp"

namespace lanedet {

/// Organized point cloud: one camera-frame point per pixel (x right, y down, z forward).
struct PointGrid {
  Raster<Eigen::Vector3d> points;
  Mask validity;

  int width() const { return points.width(); }
  int height() const { return points.height(); }
  bool valid(int x, int y) const { return validity(x, y) != 0; }
};

/// Unit surface normals oriented toward the camera.
struct NormalMap {
  Raster<Eigen::Vector3d> normals;
  Mask validity;

  int width() const { return normals.width(); }
  int height() const { return normals.height(); }
  bool valid(int x, int y) const { return validity(x, y) != 0; }
};

/// Camera-only part of the fast least-squares normal fit: unit pixel rays and,
/// per pixel, the inverse of sum(v v^T) over the (border-clipped) window.
class FalsPrecomp {
 public:
  FalsPrecomp(const CameraIntrinsics& camera, int window);

  const CameraIntrinsics& camera() const { return camera_; }
  int window() const { return window_; }

  const Eigen::Vector3d& ray(int x, int y) const { return rays_(x, y); }
  bool usable(int x, int y) const { return usable_(x, y) != 0; }
  Eigen::Matrix3d inverse(int x, int y) const;

 private:
  friend NormalMap falsNormals(const PointGrid&, const DepthImage&, const FalsPrecomp&, bool);

  CameraIntrinsics camera_;
  int window_;
  Raster<Eigen::Vector3d> rays_;
  Raster<std::array<double, 6>> inverse_;  // xx xy xz yy yz zz
  Mask usable_;
};

/// Condition-number estimate above which a window matrix is treated as singular.
inline constexpr double kFalsMaxCondition = 1e12;

/// Zeroes every pixel strictly below `tauC`; the rest keep their intensity.
GrayImage toHalfBinary(const GrayImage& gray, int tauC);

/// Pinhole backprojection of every valid depth pixel. Throws InputError on a size mismatch.
PointGrid backproject(const DepthImage& depth, const CameraIntrinsics& camera);

/// Throws ParameterError unless `window` is odd and >= 3.
FalsPrecomp falsPrecompute(const CameraIntrinsics& camera, int window);

/// Per-pixel plane fit n = M^-1 b with b = sum(v_i / r_i) over valid window samples.
/// A pixel needs at least three valid samples and a usable M^-1. With `useZDepth`
/// the sample's z replaces its range r_i.
NormalMap falsNormals(const PointGrid& grid, const DepthImage& depth, const FalsPrecomp& pre,
                      bool useZDepth = false);

}  // namespace lanedet
