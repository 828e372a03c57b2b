#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lanedet/dataset.hpp"
#include "lanedet/pipeline.hpp"

namespace lanedet {

enum class Verdict { TruePositive, FalsePositive, Neither, Skipped };

const char* toString(Verdict verdict);

struct FrameVerdict {
  int frameIndex = 0;
  Verdict verdict = Verdict::Skipped;
  double normalErrorDeg = 0;  ///< detected frames only
  double nearFraction = 0;    ///< share of chain centers within tolerance of marker paint
};

struct StageSummary {
  std::string stage;
  double meanMs = 0, medianMs = 0, p95Ms = 0;
  double share = 0;  ///< stage mean over the mean total
};

struct EvalReport {
  int frames = 0;
  double truePositiveRate = 0;
  double falsePositiveRate = 0;
  std::vector<FrameVerdict> perFrame;
  std::vector<StageSummary> timingSummary;
};

/// Scores detections against ground truth. A detected frame is a true positive when its
/// plane normal is within `toleranceDeg` of the truth and at least 80% of its chain
/// centers lie within `tolerancePx` of marker paint; it is a false positive when more
/// than 20% do not. Both rates divide by the total frame count.
EvalReport evaluate(const std::vector<DetectionResult>& results, const std::vector<GroundTruth>& truths,
                    double tolerancePx = 5.0, double toleranceDeg = 5.0);

/// Loads ground truth for every dataset frame. Throws InputError if any is missing or
/// if `results` does not cover the dataset.
EvalReport evaluate(const std::vector<DetectionResult>& results, const std::filesystem::path& dataset,
                    double tolerancePx = 5.0, double toleranceDeg = 5.0);

/// Fraction of `centers` within `tolerancePx` of a set mask pixel (0 for no centers).
double nearMarkerFraction(const std::vector<Eigen::Vector2d>& centers, const Mask& markerMask, double tolerancePx);

/// Per-stage mean, median, p95 and share of the mean total, followed by a `total` row.
std::vector<StageSummary> summarizeTimings(const std::vector<DetectionResult>& results);

/// Aligned table followed by `stage,mean_ms,median_ms,p95_ms,share` lines.
std::string benchReport(const std::vector<DetectionResult>& results);

std::string formatEvalReport(const EvalReport& report);

}  // namespace lanedet
