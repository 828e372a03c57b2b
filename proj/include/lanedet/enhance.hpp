#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lanedet/config.hpp"
#include "lanedet/image.hpp"
#include "lanedet/matching.hpp"

namespace lanedet {

struct PixelPeak {
  int x = 0, y = 0;
  double value = 0;
};

/// 8-connected pixels around the global maximum whose value clears a threshold.
struct PeakRegion {
  PixelPeak peak;
  std::vector<Eigen::Vector2i> points;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();  ///< value-weighted
};

/// Sliding-box centers traced along one marker, ordered end to end.
struct MarkerChain {
  Side side = Side::Left;
  std::vector<Eigen::Vector2d> centers;
  double theta = 0;
  int stepsForward = 0;   ///< box updates taken along +theta
  int stepsBackward = 0;  ///< box updates taken along -theta
};

/// Global argmax (ties: smallest row, then column) flood-filled over values >= threshold.
/// Returns nullopt when the maximum itself is below the threshold.
std::optional<PeakRegion> selectPeakRegion(const FloatMap& map, double threshold);

/// Orientation in [0, pi) of the principal axis of `points` (unweighted covariance).
/// Returns `previousTheta` when the covariance is isotropic (eigenvalue ratio < 1.05).
/// Throws DegenerateRegionError for fewer than two distinct points.
double principalAngle(std::span<const Eigen::Vector2d> points, double previousTheta);
double pcaAngle(const PeakRegion& region, double previousTheta);

/// Upper bound on box updates per direction: ceil(image diagonal / r).
int traceStepLimit(int width, int height, double jumpStep);

/// Slides a templateSize box from the region centroid along +theta and -theta.
/// Each step predicts O + r(cos, sin) and centers the box there; the in-box pixels
/// >= pPca lying more than r/2 ahead of O give a weighted centroid, and the next
/// origin is the prediction if it lies within r of that centroid, else the
/// centroid. A direction stops when the prediction leaves the image, the in-box
/// set is empty, or the step limit is hit.
MarkerChain traceMarker(const FloatMap& map, const PeakRegion& start, double theta, const Config& cfg,
                        Side side = Side::Left);

}  // namespace lanedet
