#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace lanedet {

/// Ideal pinhole model shared by the gray and depth rasters of a frame.
struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  /// Throws ParameterError when the focal lengths or principal point are out of range.
  void validate() const;

  /// Un-normalized viewing ray (z = 1) through the center of pixel (x, y).
  Eigen::Vector3d ray(double x, double y) const {
    return {(x - cx) / fx, (y - cy) / fy, 1.0};
  }

  /// Projects a camera-frame point back to pixel coordinates.
  Eigen::Vector2d project(const Eigen::Vector3d& p) const {
    return {fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy};
  }

  bool operator==(const CameraIntrinsics&) const = default;
};

/// Row-major raster of pixels.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::span<T> pixels() { return data_; }
  std::span<const T> pixels() const { return data_; }

  template <typename U>
  bool sameShape(const Raster<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Raster&) const = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using GrayImage = Raster<std::uint8_t>;
using FloatMap = Raster<double>;
using Mask = Raster<std::uint8_t>;

/// Depth in meters; invalid pixels hold 0 and a cleared validity flag.
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height) : meters_(width, height, 0.0), valid_(width, height, 0) {}

  int width() const { return meters_.width(); }
  int height() const { return meters_.height(); }

  double depth(int x, int y) const { return meters_(x, y); }
  bool valid(int x, int y) const { return valid_(x, y) != 0; }

  /// Stores `meters`; non-positive or non-finite values mark the pixel invalid.
  void set(int x, int y, double meters);
  void invalidate(int x, int y) { set(x, y, 0.0); }

  const FloatMap& meters() const { return meters_; }
  const Mask& validity() const { return valid_; }

  template <typename U>
  bool sameShape(const Raster<U>& other) const {
    return meters_.sameShape(other);
  }

  bool operator==(const DepthImage&) const = default;

 private:
  FloatMap meters_;
  Mask valid_;
};

/// Registered gray + depth pair.
struct Frame {
  GrayImage gray;
  DepthImage depth;
  CameraIntrinsics camera;
};

}  // namespace lanedet
