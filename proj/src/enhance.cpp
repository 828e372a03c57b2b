#include "lanedet/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lanedet/error.hpp"

namespace lanedet {

std::optional<PeakRegion> selectPeakRegion(const FloatMap& map, double threshold) {
  if (map.empty()) return std::nullopt;

  PixelPeak peak{0, 0, map(0, 0)};
  for (int y = 0; y < map.height(); ++y) {
    auto row = map.row(y);
    for (int x = 0; x < map.width(); ++x) {
      if (row[x] > peak.value) peak = {x, y, row[x]};
    }
  }
  if (!(peak.value >= threshold)) return std::nullopt;

  PeakRegion region;
  region.peak = peak;
  Mask visited(map.width(), map.height(), 0);
  visited(peak.x, peak.y) = 1;
  region.points.emplace_back(peak.x, peak.y);
  double weight = 0;
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (std::size_t head = 0; head < region.points.size(); ++head) {
    const Eigen::Vector2i p = region.points[head];
    const double v = map(p.x(), p.y());
    weight += v;
    acc += v * p.cast<double>();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = p.x() + dx, ny = p.y() + dy;
        if (!map.contains(nx, ny) || visited(nx, ny) || !(map(nx, ny) >= threshold)) continue;
        visited(nx, ny) = 1;
        region.points.emplace_back(nx, ny);
      }
    }
  }
  region.centroid = weight > 0 ? Eigen::Vector2d(acc / weight) : Eigen::Vector2d(peak.x, peak.y);
  return region;
}

double principalAngle(std::span<const Eigen::Vector2d> points, double previousTheta) {
  if (points.size() < 2) throw DegenerateRegionError("principal axis needs at least two points");

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& p : points) {
    const Eigen::Vector2d d = p - mean;
    sxx += d.x() * d.x();
    syy += d.y() * d.y();
    sxy += d.x() * d.y();
  }
  const double n = static_cast<double>(points.size());
  sxx /= n;
  syy /= n;
  sxy /= n;

  const double halfTrace = 0.5 * (sxx + syy);
  const double spread = std::hypot(0.5 * (sxx - syy), sxy);
  const double major = halfTrace + spread, minor = halfTrace - spread;
  if (!(major > 0)) throw DegenerateRegionError("all region points coincide");
  if (major < 1.05 * minor) return previousTheta;

  double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  if (theta < 0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  return theta;
}

double pcaAngle(const PeakRegion& region, double previousTheta) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(region.points.size());
  for (const auto& p : region.points) pts.push_back(p.cast<double>());
  return principalAngle(pts, previousTheta);
}

int traceStepLimit(int width, int height, double jumpStep) {
  return static_cast<int>(std::ceil(std::hypot(width, height) / jumpStep));
}

namespace {

// One direction of the box slide; returns the visited origins (start excluded).
std::vector<Eigen::Vector2d> slide(const FloatMap& map, Eigen::Vector2d origin, const Eigen::Vector2d& dir,
                                   const Config& cfg, int& steps) {
  std::vector<Eigen::Vector2d> visited;
  const int limit = traceStepLimit(map.width(), map.height(), cfg.jumpStep);
  const int half = cfg.templateSize / 2;
  // Only pixels nearer (along dir) to the prediction than to the current origin count.
  const double ahead = 0.5 * cfg.jumpStep;
  steps = 0;
  while (steps < limit) {
    const Eigen::Vector2d predicted = origin + cfg.jumpStep * dir;
    if (predicted.x() < 0 || predicted.y() < 0 || predicted.x() > map.width() - 1 ||
        predicted.y() > map.height() - 1)
      break;
    ++steps;

    const int x0 = static_cast<int>(std::lround(predicted.x())) - half;
    const int y0 = static_cast<int>(std::lround(predicted.y())) - half;
    double weight = 0;
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (int y = std::max(0, y0); y < std::min(map.height(), y0 + cfg.templateSize); ++y) {
      auto row = map.row(y);
      for (int x = std::max(0, x0); x < std::min(map.width(), x0 + cfg.templateSize); ++x) {
        if (row[x] >= cfg.pPca && (Eigen::Vector2d(x, y) - origin).dot(dir) > ahead) {
          weight += row[x];
          acc += row[x] * Eigen::Vector2d(x, y);
        }
      }
    }
    if (weight <= 0) break;

    const Eigen::Vector2d centroid = acc / weight;
    const Eigen::Vector2d next =
        (predicted - centroid).squaredNorm() <= cfg.jumpStep * cfg.jumpStep ? predicted : centroid;
    visited.push_back(next);
    origin = next;
  }
  return visited;
}

}  // namespace

MarkerChain traceMarker(const FloatMap& map, const PeakRegion& start, double theta, const Config& cfg, Side side) {
  MarkerChain chain;
  chain.side = side;
  chain.theta = theta;
  const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));

  auto backward = slide(map, start.centroid, -dir, cfg, chain.stepsBackward);
  auto forward = slide(map, start.centroid, dir, cfg, chain.stepsForward);

  chain.centers.assign(backward.rbegin(), backward.rend());
  chain.centers.push_back(start.centroid);
  chain.centers.insert(chain.centers.end(), forward.begin(), forward.end());
  return chain;
}

}  // namespace lanedet
