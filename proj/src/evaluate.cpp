#include "lanedet/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "lanedet/error.hpp"

namespace lanedet {
namespace {

double median(std::vector<double> v) {
  std::ranges::sort(v);
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Nearest-rank percentile.
double percentile(std::vector<double> v, double p) {
  std::ranges::sort(v);
  const auto rank = static_cast<std::size_t>(std::ceil(p * v.size()));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

}  // namespace

const char* toString(Verdict verdict) {
  switch (verdict) {
    case Verdict::TruePositive: return "tp";
    case Verdict::FalsePositive: return "fp";
    case Verdict::Neither: return "neither";
    case Verdict::Skipped: return "skipped";
  }
  return "unknown";
}

double nearMarkerFraction(const std::vector<Eigen::Vector2d>& centers, const Mask& markerMask, double tolerancePx) {
  if (centers.empty()) return 0.0;
  const int reach = static_cast<int>(std::ceil(tolerancePx));
  const double tol2 = tolerancePx * tolerancePx;
  std::size_t near = 0;
  for (const auto& c : centers) {
    const int cx = static_cast<int>(std::lround(c.x())), cy = static_cast<int>(std::lround(c.y()));
    bool hit = false;
    for (int y = cy - reach; y <= cy + reach && !hit; ++y) {
      for (int x = cx - reach; x <= cx + reach && !hit; ++x) {
        if (!markerMask.contains(x, y) || !markerMask(x, y)) continue;
        const double dx = x - c.x(), dy = y - c.y();
        hit = dx * dx + dy * dy <= tol2;
      }
    }
    near += hit;
  }
  return static_cast<double>(near) / centers.size();
}

EvalReport evaluate(const std::vector<DetectionResult>& results, const std::vector<GroundTruth>& truths,
                    double tolerancePx, double toleranceDeg) {
  if (results.size() != truths.size()) throw InputError("results and ground truth differ in frame count");

  EvalReport report;
  report.frames = static_cast<int>(results.size());
  int tp = 0, fp = 0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    FrameVerdict v{r.frameIndex, Verdict::Skipped, 0, 0};
    if (r.detected()) {
      std::vector<Eigen::Vector2d> centers;
      for (const auto* chain : {&r.leftChain, &r.rightChain})
        if (*chain) centers.insert(centers.end(), (*chain)->centers.begin(), (*chain)->centers.end());
      v.nearFraction = nearMarkerFraction(centers, truths[k].markerMask, tolerancePx);
      v.normalErrorDeg = normalAngleDeg(r.plane->normal, truths[k].plane.normal);
      if (v.normalErrorDeg <= toleranceDeg && v.nearFraction >= 0.8) {
        v.verdict = Verdict::TruePositive;
        ++tp;
      } else if (!centers.empty() && 1.0 - v.nearFraction > 0.2) {
        v.verdict = Verdict::FalsePositive;
        ++fp;
      } else {
        v.verdict = Verdict::Neither;
      }
    }
    report.perFrame.push_back(v);
  }
  if (report.frames > 0) {
    report.truePositiveRate = static_cast<double>(tp) / report.frames;
    report.falsePositiveRate = static_cast<double>(fp) / report.frames;
  }
  if (!results.empty()) report.timingSummary = summarizeTimings(results);
  return report;
}

EvalReport evaluate(const std::vector<DetectionResult>& results, const std::filesystem::path& dataset,
                    double tolerancePx, double toleranceDeg) {
  const std::vector<int> indices = listFrames(dataset);
  if (indices.size() != results.size()) throw InputError("results do not cover every dataset frame");
  std::vector<GroundTruth> truths;
  truths.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (results[k].frameIndex != indices[k]) throw InputError("results are not in dataset frame order");
    truths.push_back(loadGroundTruth(dataset, indices[k]));
  }
  return evaluate(results, truths, tolerancePx, toleranceDeg);
}

std::vector<StageSummary> summarizeTimings(const std::vector<DetectionResult>& results) {
  std::vector<StageSummary> rows;
  if (results.empty()) return rows;

  std::vector<std::vector<double>> samples(StageTimings::kNames.size() + 1);
  for (const auto& r : results) {
    const auto values = r.stageTimings.values();
    for (std::size_t s = 0; s < values.size(); ++s) samples[s].push_back(values[s]);
    samples.back().push_back(r.stageTimings.total());
  }
  const double n = static_cast<double>(results.size());
  const double totalMean = std::accumulate(samples.back().begin(), samples.back().end(), 0.0) / n;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    StageSummary row;
    row.stage = s < StageTimings::kNames.size() ? StageTimings::kNames[s] : "total";
    row.meanMs = std::accumulate(samples[s].begin(), samples[s].end(), 0.0) / n;
    row.medianMs = median(samples[s]);
    row.p95Ms = percentile(samples[s], 0.95);
    row.share = totalMean > 0 ? row.meanMs / totalMean : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::string benchReport(const std::vector<DetectionResult>& results) {
  const auto rows = summarizeTimings(results);
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %8s\n", "stage", "mean ms", "median ms", "p95 ms", "share");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-12s %10.3f %10.3f %10.3f %7.1f%%\n", r.stage.c_str(), r.meanMs, r.medianMs,
                  r.p95Ms, 100.0 * r.share);
    out << line;
  }
  out << '\n';
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.4f,%.4f,%.4f,%.4f\n", r.stage.c_str(), r.meanMs, r.medianMs, r.p95Ms,
                  r.share);
    out << line;
  }
  return out.str();
}

std::string formatEvalReport(const EvalReport& report) {
  std::ostringstream out;
  int counts[4] = {0, 0, 0, 0};
  for (const auto& v : report.perFrame) ++counts[static_cast<int>(v.verdict)];
  char line[256];
  std::snprintf(line, sizeof line,
                "frames %d\ntrue positive rate %.4f\nfalse positive rate %.4f\n"
                "verdicts tp=%d fp=%d neither=%d skipped=%d\n",
                report.frames, report.truePositiveRate, report.falsePositiveRate, counts[0], counts[1], counts[2],
                counts[3]);
  out << line;
  if (!report.timingSummary.empty()) {
    out << '\n';
    for (const auto& r : report.timingSummary) {
      std::snprintf(line, sizeof line, "%s,%.4f,%.4f,%.4f,%.4f\n", r.stage.c_str(), r.meanMs, r.medianMs, r.p95Ms,
                    r.share);
      out << line;
    }
  }
  return out.str();
}

}  // namespace lanedet
