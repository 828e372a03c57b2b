#include "lanedet/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "lanedet/error.hpp"

namespace lanedet {
namespace {

// Sums `src` over a clipped (2*half+1)^2 window around every pixel, separably.
// Row pass first, then column pass; both clip at the raster border.
template <typename T>
Raster<T> boxSum(const Raster<T>& src, int half, const T& zero) {
  const int w = src.width(), h = src.height();
  Raster<T> rows(w, h, zero);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      T acc = zero;
      for (int k = std::max(0, x - half); k <= std::min(w - 1, x + half); ++k) acc += src(k, y);
      rows(x, y) = acc;
    }
  }
  Raster<T> out(w, h, zero);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - half), y1 = std::min(h - 1, y + half);
    for (int x = 0; x < w; ++x) {
      T acc = zero;
      for (int k = y0; k <= y1; ++k) acc += rows(x, k);
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

GrayImage toHalfBinary(const GrayImage& gray, int tauC) {
  GrayImage out = gray;
  for (auto& v : out.pixels())
    if (v < tauC) v = 0;
  return out;
}

PointGrid backproject(const DepthImage& depth, const CameraIntrinsics& camera) {
  if (depth.width() != camera.width || depth.height() != camera.height)
    throw InputError("depth raster does not match the camera size");

  PointGrid grid{Raster<Eigen::Vector3d>(depth.width(), depth.height(), Eigen::Vector3d::Zero()),
                 Mask(depth.width(), depth.height(), 0)};
  for (int j = 0; j < depth.height(); ++j) {
    for (int i = 0; i < depth.width(); ++i) {
      if (!depth.valid(i, j)) continue;
      const double d = depth.depth(i, j);
      grid.points(i, j) = {(i - camera.cx) / camera.fx * d, (j - camera.cy) / camera.fy * d, d};
      grid.validity(i, j) = 1;
    }
  }
  return grid;
}

FalsPrecomp::FalsPrecomp(const CameraIntrinsics& camera, int window)
    : camera_(camera), window_(window) {
  camera.validate();
  if (window < 3 || window % 2 == 0) throw ParameterError("FALS window must be odd and >= 3");

  const int w = camera.width, h = camera.height;
  rays_ = Raster<Eigen::Vector3d>(w, h);
  Raster<std::array<double, 6>> outer(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Eigen::Vector3d v = camera.ray(x, y).normalized();
      rays_(x, y) = v;
      outer(x, y) = {v.x() * v.x(), v.x() * v.y(), v.x() * v.z(), v.y() * v.y(), v.y() * v.z(), v.z() * v.z()};
    }
  }

  struct Sym {
    std::array<double, 6> e{};
    Sym& operator+=(const std::array<double, 6>& o) {
      for (int k = 0; k < 6; ++k) e[k] += o[k];
      return *this;
    }
    Sym& operator+=(const Sym& o) { return *this += o.e; }
  };
  Raster<Sym> asSym(w, h);
  for (std::size_t i = 0; i < outer.size(); ++i) asSym.pixels()[i].e = outer.pixels()[i];
  const Raster<Sym> moments = boxSum(asSym, window / 2, Sym{});

  inverse_ = Raster<std::array<double, 6>>(w, h);
  usable_ = Mask(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto& e = moments(x, y).e;
      Eigen::Matrix3d m;
      m << e[0], e[1], e[2], e[1], e[3], e[4], e[2], e[4], e[5];
      Eigen::Matrix3d inv;
      bool invertible = false;
      double det = 0;
      m.computeInverseAndDetWithCheck(inv, det, invertible, 0.0);
      if (!invertible || !inv.allFinite()) continue;
      const double cond = m.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
      if (!(cond <= kFalsMaxCondition)) continue;
      inverse_(x, y) = {inv(0, 0), inv(0, 1), inv(0, 2), inv(1, 1), inv(1, 2), inv(2, 2)};
      usable_(x, y) = 1;
    }
  }
}

Eigen::Matrix3d FalsPrecomp::inverse(int x, int y) const {
  const auto& e = inverse_(x, y);
  Eigen::Matrix3d m;
  m << e[0], e[1], e[2], e[1], e[3], e[4], e[2], e[4], e[5];
  return m;
}

FalsPrecomp falsPrecompute(const CameraIntrinsics& camera, int window) { return FalsPrecomp(camera, window); }

NormalMap falsNormals(const PointGrid& grid, const DepthImage& depth, const FalsPrecomp& pre, bool useZDepth) {
  const int w = pre.camera().width, h = pre.camera().height;
  if (grid.width() != w || grid.height() != h || depth.width() != w || depth.height() != h)
    throw InputError("normal estimation inputs differ in size");

  // Per-sample term v_i / r_i; invalid samples contribute nothing.
  Raster<Eigen::Vector3d> terms(w, h, Eigen::Vector3d::Zero());
  Raster<int> counts(w, h, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!grid.valid(x, y)) continue;
      const Eigen::Vector3d& p = grid.points(x, y);
      const double r = useZDepth ? p.z() : p.norm();
      terms(x, y) = pre.ray(x, y) / r;
      counts(x, y) = 1;
    }
  }
  const int half = pre.window() / 2;
  const Raster<Eigen::Vector3d> b = boxSum(terms, half, Eigen::Vector3d::Zero().eval());
  const Raster<int> valid = boxSum(counts, half, 0);

  NormalMap out{Raster<Eigen::Vector3d>(w, h, Eigen::Vector3d::Zero()), Mask(w, h, 0)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (valid(x, y) < 3 || !pre.usable(x, y)) continue;
      const auto& e = pre.inverse_(x, y);
      const Eigen::Vector3d& bb = b(x, y);
      Eigen::Vector3d n(e[0] * bb.x() + e[1] * bb.y() + e[2] * bb.z(),
                        e[1] * bb.x() + e[3] * bb.y() + e[4] * bb.z(),
                        e[2] * bb.x() + e[4] * bb.y() + e[5] * bb.z());
      const double len = n.norm();
      if (!(len > 0) || !std::isfinite(len)) continue;
      n /= len;
      if (n.dot(pre.ray(x, y)) > 0) n = -n;
      out.normals(x, y) = n;
      out.validity(x, y) = 1;
    }
  }
  return out;
}

}  // namespace lanedet
