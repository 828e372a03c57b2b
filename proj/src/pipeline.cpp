#include "lanedet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <thread>

#include "lanedet/dataset.hpp"
#include "lanedet/error.hpp"

namespace lanedet {
namespace {

using Clock = std::chrono::steady_clock;

double elapsedMs(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Angles the templates can be rebuilt at; PCA folds into [0, pi) so 0 is possible.
bool usableAngle(double theta) { return theta > 0 && theta < std::numbers::pi; }

double refineAngle(const PeakRegion& region, double current) {
  try {
    double theta = pcaAngle(region, current);
    return usableAngle(theta) ? theta : current;
  } catch (const DegenerateRegionError&) {
    return current;
  }
}

}  // namespace

const char* toString(SkipReason reason) {
  switch (reason) {
    case SkipReason::None: return "none";
    case SkipReason::NoPeak: return "no-peak";
    case SkipReason::DepthGap: return "depth-gap";
    case SkipReason::DegeneratePlane: return "degenerate-plane";
  }
  return "unknown";
}

DetectionContext::DetectionContext(const Config& cfg, const CameraIntrinsics& camera, bool feedback)
    : cfg_(cfg),
      camera_(camera),
      feedback_(feedback),
      precomp_(camera, cfg.falsWindow),
      left_(makeTemplate(cfg.templateSize, cfg.thetaLeftDeg * std::numbers::pi / 180.0, cfg.effectiveStripeWidth(),
                         Side::Left)),
      right_(makeTemplate(cfg.templateSize, cfg.thetaLeftDeg * std::numbers::pi / 180.0,
                          cfg.effectiveStripeWidth(), Side::Right)) {
  cfg_.validate();
}

DetectionResult DetectionContext::process(const Frame& frame, int frameIndex, FrameArtifacts* artifacts) {
  if (!(frame.camera == camera_)) throw InputError("frame camera differs from the detection context");

  DetectionResult result;
  result.frameIndex = frameIndex;
  auto& timing = result.stageTimings;

  auto t0 = Clock::now();
  GrayImage half = toHalfBinary(frame.gray, cfg_.tauC);
  PointGrid grid = backproject(frame.depth, camera_);
  NormalMap normals = falsNormals(grid, frame.depth, precomp_, cfg_.falsUseZDepth);
  timing.preprocess = elapsedMs(t0);

  t0 = Clock::now();
  FloatMap mLeft = nccMatch(half, left_, cfg_.nccFloor);
  FloatMap mRight = nccMatch(half, right_, cfg_.nccFloor);
  timing.matching = elapsedMs(t0);

  t0 = Clock::now();
  RespondMaps maps = respondMaps(mLeft, mRight, geomMap(normals, frame.depth, cfg_), cfg_.tauG);
  timing.respond = elapsedMs(t0);

  t0 = Clock::now();
  auto leftRegion = selectPeakRegion(maps.left, cfg_.pPca);
  auto rightRegion = selectPeakRegion(maps.right, cfg_.pPca);
  result.refinedThetaLeft = left_.theta();
  result.refinedThetaRight = right_.theta();
  if (leftRegion) {
    result.leftPeak = leftRegion->peak;
    result.refinedThetaLeft = refineAngle(*leftRegion, left_.theta());
    result.leftChain = traceMarker(maps.left, *leftRegion, result.refinedThetaLeft, cfg_, Side::Left);
  }
  if (rightRegion) {
    result.rightPeak = rightRegion->peak;
    result.refinedThetaRight = refineAngle(*rightRegion, right_.theta());
    result.rightChain = traceMarker(maps.right, *rightRegion, result.refinedThetaRight, cfg_, Side::Right);
  }
  timing.enhance = elapsedMs(t0);

  t0 = Clock::now();
  if (!leftRegion || !rightRegion) {
    result.skipReason = SkipReason::NoPeak;
  } else {
    // v_a2: the right-chain center whose 3D point lies furthest from the camera.
    std::optional<Eigen::Vector2d> far;
    double farRange = -1;
    for (const auto& c : result.rightChain->centers) {
      try {
        const double range = lookup3D(grid, c).norm();
        if (range > farRange) {
          farRange = range;
          far = c;
        }
      } catch (const DepthGapError&) {
      }
    }
    try {
      if (!far) throw DepthGapError("no right-chain center has depth");
      const Eigen::Vector2d leftPeak(result.leftPeak->x, result.leftPeak->y);
      const Eigen::Vector2d rightPeak(result.rightPeak->x, result.rightPeak->y);
      result.plane = fitPlane(grid, leftPeak, rightPeak, *far);
      result.status = FrameStatus::Detected;
    } catch (const DepthGapError&) {
      result.skipReason = SkipReason::DepthGap;
    } catch (const DegeneratePlaneError&) {
      result.skipReason = SkipReason::DegeneratePlane;
    }
  }
  timing.lanefit = elapsedMs(t0);

  if (feedback_) {
    left_ = rotateTemplate(left_, result.refinedThetaLeft);
    right_ = rotateTemplate(right_, result.refinedThetaRight);
  }
  if (artifacts) {
    *artifacts = FrameArtifacts{std::move(half), std::move(grid), std::move(normals),
                                std::move(mLeft), std::move(mRight), std::move(maps)};
  }
  return result;
}

std::vector<DetectionResult> runPipeline(const std::filesystem::path& dataset, const Config& cfg,
                                         const RunOptions& options) {
  cfg.validate();
  if (options.workers < 1) throw ParameterError("worker count must be positive");
  if (options.feedback && options.workers > 1)
    throw ParameterError("template feedback makes frames sequential; parallel workers need it off");
  const CameraIntrinsics camera = readCamera(dataset);
  const std::vector<int> indices = listFrames(dataset);
  std::vector<DetectionResult> results(indices.size());

  if (options.workers == 1) {
    DetectionContext context(cfg, camera, options.feedback);
    for (std::size_t k = 0; k < indices.size(); ++k)
      results[k] = context.process(loadFrame(dataset, indices[k], camera), indices[k]);
    return results;
  }

  // Without feedback every frame is independent.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      DetectionContext context(cfg, camera, false);
      for (std::size_t k = next++; k < indices.size() && !failed; k = next++)
        results[k] = context.process(loadFrame(dataset, indices[k], camera), indices[k]);
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  std::vector<std::jthread> pool;
  for (int i = 0; i < options.workers; ++i) pool.emplace_back(work);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::string formatResultLine(const DetectionResult& r) {
  const std::string status = r.detected() ? "detected" : std::string("skipped:") + toString(r.skipReason);
  const LanePlane plane = r.plane.value_or(LanePlane{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(), {}});
  char buf[512];
  std::snprintf(buf, sizeof buf, "%d,%s,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.6f,%zu,%zu", r.frameIndex, status.c_str(),
                plane.normal.x(), plane.normal.y(), plane.normal.z(), plane.point.x(), plane.point.y(),
                plane.point.z(), r.refinedThetaLeft * 180.0 / std::numbers::pi,
                r.leftChain ? r.leftChain->centers.size() : 0, r.rightChain ? r.rightChain->centers.size() : 0);
  return buf;
}

void writeResults(const std::filesystem::path& path, const std::vector<DetectionResult>& results) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& r : results) out << formatResultLine(r) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

GrayImage drawOverlay(const GrayImage& gray, const DetectionResult& result) {
  GrayImage out = gray;
  auto cross = [&](double fx, double fy, int arm, std::uint8_t value) {
    const int x = static_cast<int>(std::lround(fx)), y = static_cast<int>(std::lround(fy));
    for (int d = -arm; d <= arm; ++d) {
      if (out.contains(x + d, y)) out(x + d, y) = value;
      if (out.contains(x, y + d)) out(x, y + d) = value;
    }
  };
  for (const auto* chain : {&result.leftChain, &result.rightChain})
    if (*chain)
      for (const auto& c : (*chain)->centers) cross(c.x(), c.y(), 2, 255);
  for (const auto* peak : {&result.leftPeak, &result.rightPeak})
    if (*peak) cross((*peak)->x, (*peak)->y, 5, 255);
  return out;
}

}  // namespace lanedet
