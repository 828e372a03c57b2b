#pragma once

// Test-only oracles and fixtures. Nothing here calls into the code paths it checks.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <unistd.h>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "lanedet/image.hpp"

namespace lanedet::testing {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg(double rad) { return rad * 180.0 / kPi; }
inline double rad(double deg) { return deg * kPi / 180.0; }

inline double angleBetweenDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const Eigen::Vector3d u = a.normalized(), v = b.normalized();
  return deg(std::atan2(u.cross(v).norm(), u.dot(v)));
}

/// Depth image of the plane {p : n . p = d} seen through `cam`; pixels whose ray
/// misses the plane (or hits behind the camera) are invalid.
inline DepthImage renderPlaneDepth(const CameraIntrinsics& cam, const Eigen::Vector3d& n, double d) {
  DepthImage depth(cam.width, cam.height);
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const Eigen::Vector3d ray((x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy, 1.0);
      const double denom = n.dot(ray);
      if (std::abs(denom) < 1e-12) continue;
      const double z = d / denom;
      if (z > 0) depth.set(x, y, z);
    }
  }
  return depth;
}

/// Straight double-loop zero-mean NCC of a template against the patch with top-left (x0, y0).
inline double bruteNcc(const GrayImage& image, const GrayImage& tpl, int x0, int y0) {
  const int s = tpl.width();
  double meanI = 0, meanT = 0;
  for (int y = 0; y < s; ++y)
    for (int x = 0; x < s; ++x) {
      meanI += image(x0 + x, y0 + y);
      meanT += tpl(x, y);
    }
  meanI /= s * s;
  meanT /= s * s;
  double num = 0, ei = 0, et = 0;
  for (int y = 0; y < s; ++y)
    for (int x = 0; x < s; ++x) {
      const double a = image(x0 + x, y0 + y) - meanI, b = tpl(x, y) - meanT;
      num += a * b;
      ei += a * a;
      et += b * b;
    }
  if (ei == 0 || et == 0) return 0.0;
  return num / std::sqrt(ei * et);
}

/// Total-least-squares plane normal of a point set (smallest right singular vector).
template <typename Points>
Eigen::Vector3d svdNormal(const Points& pts) {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::MatrixXd centered(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) centered.row(i) = (pts[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  return svd.matrixV().col(2);
}

inline GrayImage randomGray(int w, int h, std::mt19937& rng) {
  GrayImage img(w, h);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(dist(rng));
  return img;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("lanedet_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace lanedet::testing
