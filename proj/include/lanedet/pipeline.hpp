#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lanedet/config.hpp"
#include "lanedet/enhance.hpp"
#include "lanedet/image.hpp"
#include "lanedet/lanefit.hpp"
#include "lanedet/matching.hpp"
#include "lanedet/preprocess.hpp"
#include "lanedet/respond.hpp"

namespace lanedet {

/// Wall-clock milliseconds per pipeline stage.
struct StageTimings {
  double preprocess = 0;
  double matching = 0;
  double respond = 0;
  double enhance = 0;
  double lanefit = 0;

  static constexpr std::array<const char*, 5> kNames = {"preprocess", "matching", "respond", "enhance", "lanefit"};
  std::array<double, 5> values() const { return {preprocess, matching, respond, enhance, lanefit}; }
  double total() const { return preprocess + matching + respond + enhance + lanefit; }
};

enum class FrameStatus { Detected, Skipped };

/// Why a frame produced no lane plane.
enum class SkipReason { None, NoPeak, DepthGap, DegeneratePlane };

const char* toString(SkipReason reason);

struct DetectionResult {
  int frameIndex = 0;
  FrameStatus status = FrameStatus::Skipped;
  SkipReason skipReason = SkipReason::None;
  std::optional<PixelPeak> leftPeak, rightPeak;
  std::optional<MarkerChain> leftChain, rightChain;
  std::optional<LanePlane> plane;
  StageTimings stageTimings;
  double refinedThetaLeft = 0;   ///< template angle carried to the next frame
  double refinedThetaRight = 0;

  bool detected() const { return status == FrameStatus::Detected; }
};

/// Intermediate rasters of the last processed frame, for overlays and diagnostics.
struct FrameArtifacts {
  GrayImage halfBinary;
  PointGrid grid;
  NormalMap normals;
  FloatMap matchLeft, matchRight;
  RespondMaps respond;
};

/// Per-stream detector state: the normal-fit precompute and the two templates whose
/// angles are refined from each frame's peak regions and applied to the next frame.
/// Not thread-safe; one instance per stream.
class DetectionContext {
 public:
  DetectionContext(const Config& cfg, const CameraIntrinsics& camera, bool feedback = true);

  DetectionResult process(const Frame& frame, int frameIndex, FrameArtifacts* artifacts = nullptr);

  const Template& leftTemplate() const { return left_; }
  const Template& rightTemplate() const { return right_; }
  const Config& config() const { return cfg_; }

 private:
  Config cfg_;
  CameraIntrinsics camera_;
  bool feedback_;
  FalsPrecomp precomp_;
  Template left_, right_;
};

struct RunOptions {
  bool feedback = true;
  int workers = 1;  ///< > 1 fans frames out across threads; requires feedback off
};

/// Runs every frame of `dataset` in index order. Throws InputError for a malformed dataset.
std::vector<DetectionResult> runPipeline(const std::filesystem::path& dataset, const Config& cfg,
                                         const RunOptions& options = {});

/// `index,status,nx,ny,nz,px,py,pz,theta_deg,chain_len_left,chain_len_right`
/// status is `detected` or `skipped:<reason>`; theta_deg is the refined left angle.
std::string formatResultLine(const DetectionResult& result);
void writeResults(const std::filesystem::path& path, const std::vector<DetectionResult>& results);

/// Gray image with chain centers and peaks drawn as bright crosses.
GrayImage drawOverlay(const GrayImage& gray, const DetectionResult& result);

}  // namespace lanedet
