#pragma once

#include "lanedet/image.hpp"

namespace lanedet {

enum class Side { Left, Right };

const char* toString(Side side);

/// Square binary stripe kernel: a 255 band through the center on a 0 background.
class Template {
 public:
  int size() const { return pixels_.width(); }
  int stripeWidth() const { return stripeWidth_; }
  Side side() const { return side_; }
  /// Angle of the stripe in the image (radians from +x, y down).
  double theta() const { return theta_; }
  const GrayImage& pixels() const { return pixels_; }

  bool operator==(const Template&) const = default;

 private:
  friend Template makeTemplate(int, double, int, Side);
  friend Template rotateTemplate(const Template&, double);

  GrayImage pixels_;
  int stripeWidth_ = 0;
  Side side_ = Side::Left;
  double theta_ = 0;
  double leftTheta_ = 0;  // angle the stripe was rasterized at before any mirroring
};

/// Left templates use `theta` as given; right templates are the horizontal mirror,
/// so their stripe angle is pi - theta. Throws ParameterError on out-of-range input.
Template makeTemplate(int size, double theta, int stripeWidth, Side side);

/// Rebuilds `t` with stripe angle `newTheta` (the angle reported by theta()).
Template rotateTemplate(const Template& t, double newTheta);

/// Zero-mean normalized cross-correlation of `t` against every placement in `image`.
/// The score lands on the placement's center pixel, clamped to [floor, 1]; pixels
/// without a full placement and zero-variance patches score 0.
/// Throws InputError if the template does not fit.
FloatMap nccMatch(const GrayImage& image, const Template& t, double floor = 0.0);

}  // namespace lanedet
