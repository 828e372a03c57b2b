#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "lanedet/dataset.hpp"
#include "lanedet/error.hpp"
#include "lanedet/evaluate.hpp"
#include "lanedet/pgm.hpp"
#include "lanedet/pipeline.hpp"
#include "lanedet/synthgen.hpp"
#include "test_support.hpp"

using namespace lanedet;
using namespace lanedet::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int runCli(const std::string& args) {
  const std::string cmd = std::string(LANEBENCH_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> resultLines(const std::vector<DetectionResult>& results) {
  std::vector<std::string> lines;
  for (const auto& r : results) lines.push_back(formatResultLine(r));
  return lines;
}

// Shared small clean dataset, generated once per process.
const std::filesystem::path& cleanDataset() {
  static TempDir dir("harness_clean");
  static const bool made = (makeDataset(cleanScene(), 6, dir.path()), true);
  (void)made;
  return dir.path();
}

}  // namespace

TEST_SUITE("bench report") {
  TEST_CASE("single result arithmetic") {
    DetectionResult r;
    r.stageTimings = {4, 3, 2, 0.5, 0.1};
    const auto rows = summarizeTimings({r});
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].stage == "preprocess");
    CHECK(rows[5].stage == "total");
    CHECK(rows[5].meanMs == doctest::Approx(9.6));
    CHECK(rows[0].share == doctest::Approx(4.0 / 9.6));
    CHECK(100 * rows[0].share == doctest::Approx(41.7).epsilon(0.001));
    const std::string text = benchReport({r});
    CHECK(text.find("preprocess,4.0000,4.0000,4.0000,0.4167") != std::string::npos);
    CHECK(text.find("total,9.6000,9.6000,9.6000,1.0000") != std::string::npos);
  }

  TEST_CASE("all-zero timings report zero shares") {
    const auto rows = summarizeTimings({DetectionResult{}, DetectionResult{}});
    for (const auto& row : rows) CHECK(row.share == 0.0);
    CHECK(benchReport({DetectionResult{}}).find("nan") == std::string::npos);
  }

  TEST_CASE("median and nearest-rank p95") {
    std::vector<DetectionResult> rs(20);
    for (int i = 0; i < 20; ++i) rs[i].stageTimings.matching = i + 1;
    const auto rows = summarizeTimings(rs);
    CHECK(rows[1].meanMs == doctest::Approx(10.5));
    CHECK(rows[1].medianMs == doctest::Approx(10.5));
    CHECK(rows[1].p95Ms == doctest::Approx(19));
  }
}

TEST_SUITE("evaluation") {
  TEST_CASE("oracle-fed detections score perfectly") {
    const auto& dir = cleanDataset();
    std::vector<DetectionResult> results;
    std::vector<GroundTruth> truths;
    for (int i : listFrames(dir)) {
      GroundTruth t = loadGroundTruth(dir, i);
      DetectionResult r;
      r.frameIndex = i;
      r.status = FrameStatus::Detected;
      MarkerChain chain;
      // Centers copied from marker mask pixels.
      for (int y = 0; y < t.markerMask.height(); y += 17)
        for (int x = 0; x < t.markerMask.width(); ++x)
          if (t.markerMask(x, y)) {
            chain.centers.emplace_back(x, y);
            break;
          }
      REQUIRE_FALSE(chain.centers.empty());
      r.leftChain = chain;
      r.plane = t.plane;
      results.push_back(r);
      truths.push_back(t);
    }
    const EvalReport rep = evaluate(results, truths);
    CHECK(rep.truePositiveRate == 1.0);
    CHECK(rep.falsePositiveRate == 0.0);
  }

  TEST_CASE("all skipped gives zero rates") {
    std::vector<DetectionResult> results(3);
    std::vector<GroundTruth> truths(3);
    const EvalReport rep = evaluate(results, truths);
    CHECK(rep.frames == 3);
    CHECK(rep.truePositiveRate == 0.0);
    CHECK(rep.falsePositiveRate == 0.0);
  }

  TEST_CASE("centers off the paint are false positives") {
    GroundTruth t{Mask(20, 20, 0), Mask(20, 20, 0), {}};
    t.markerMask(2, 2) = 1;
    DetectionResult r;
    r.status = FrameStatus::Detected;
    r.plane = LanePlane{};
    r.leftChain = MarkerChain{Side::Left, {{2, 2}, {18, 18}, {17, 18}}, 0, 0, 0};
    const EvalReport rep = evaluate({r}, {t});
    CHECK((rep.perFrame[0].verdict == Verdict::FalsePositive));
    CHECK(nearMarkerFraction({{2, 2}, {18, 18}}, t.markerMask, 5) == 0.5);
    CHECK(nearMarkerFraction({}, t.markerMask, 5) == 0.0);
  }

  TEST_CASE("frame count mismatch") {
    CHECK_THROWS_AS(evaluate(std::vector<DetectionResult>(2), std::vector<GroundTruth>(3)), InputError);
  }

  TEST_CASE("missing ground truth") {
    TempDir dir("nogt");
    makeDataset(cleanScene(), 1, dir.path());
    std::filesystem::remove(framePaths(dir.path(), 0).mask);
    CHECK_THROWS_AS(evaluate(std::vector<DetectionResult>(1), dir.path()), InputError);
  }
}

TEST_SUITE("pipeline") {
  TEST_CASE("clean frames are detected and scored") {
    const auto results = runPipeline(cleanDataset(), Config{});
    int detected = 0;
    for (const auto& r : results) detected += r.detected();
    CHECK(detected >= 0.95 * results.size());
    const EvalReport rep = evaluate(results, cleanDataset());
    CHECK(rep.truePositiveRate >= 0.85);
  }

  TEST_CASE("black frames are skipped for lack of a peak") {
    TempDir dir("black");
    const SceneSpec spec = cleanScene();
    makeDataset(spec, 3, dir.path());
    for (int i : listFrames(dir.path())) saveGray(framePaths(dir.path(), i).gray, GrayImage(640, 480, 0));
    for (const auto& r : runPipeline(dir.path(), Config{})) {
      CHECK_FALSE(r.detected());
      CHECK((r.skipReason == SkipReason::NoPeak));
      CHECK(formatResultLine(r).find("skipped:no-peak") != std::string::npos);
    }
  }

  TEST_CASE("runs are deterministic apart from timings") {
    CHECK(resultLines(runPipeline(cleanDataset(), Config{})) == resultLines(runPipeline(cleanDataset(), Config{})));
  }

  TEST_CASE("parallel run without feedback matches the sequential one") {
    const auto seq = runPipeline(cleanDataset(), Config{}, {false, 1});
    const auto par = runPipeline(cleanDataset(), Config{}, {false, 4});
    CHECK(resultLines(seq) == resultLines(par));
    CHECK_THROWS_AS(runPipeline(cleanDataset(), Config{}, {true, 4}), ParameterError);
  }

  TEST_CASE("result line layout") {
    const auto results = runPipeline(cleanDataset(), Config{});
    REQUIRE(results[0].detected());
    const std::string line = formatResultLine(results[0]);
    CHECK(line.rfind("0,detected,", 0) == 0);
    CHECK(std::count(line.begin(), line.end(), ',') == 10);

    DetectionResult skipped;
    skipped.frameIndex = 12;
    skipped.skipReason = SkipReason::DepthGap;
    CHECK(formatResultLine(skipped).rfind("12,skipped:depth-gap,", 0) == 0);
  }

  TEST_CASE("feedback updates the templates") {
    const auto& dir = cleanDataset();
    const CameraIntrinsics cam = readCamera(dir);
    DetectionContext ctx(Config{}, cam);
    const double before = ctx.leftTemplate().theta();
    const DetectionResult r = ctx.process(loadFrame(dir, 0, cam), 0);
    REQUIRE(r.detected());
    CHECK(ctx.leftTemplate().theta() == doctest::Approx(r.refinedThetaLeft));
    CHECK(std::abs(ctx.leftTemplate().theta() - before) > 1e-9);

    DetectionContext fixed(Config{}, cam, false);
    fixed.process(loadFrame(dir, 0, cam), 0);
    CHECK(fixed.leftTemplate().theta() == doctest::Approx(before));
  }

  TEST_CASE("malformed dataset aborts") {
    TempDir dir("bad");
    CHECK_THROWS_AS(runPipeline(dir.path(), Config{}), InputError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    TempDir out("cli");
    CHECK(runCli("generate --out " + (out / "ds").string() + " --frames 2") == 0);
    CHECK(runCli("detect " + (out / "ds").string() + " --out " + (out / "res").string()) == 0);
    const std::string csv = slurp(out / "res" / "results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(runCli("eval " + (out / "ds").string()) == 0);
    CHECK(runCli("bench " + (out / "ds").string()) == 0);

    CHECK(runCli("eval " + (out / "missing").string()) == 1);
    std::ofstream(out / "bad.cfg") << "alpha = 0.9\nbeta = 0.5\n";
    CHECK(runCli("eval " + (out / "ds").string() + " --config " + (out / "bad.cfg").string()) == 1);
    CHECK(runCli("eval " + (out / "ds").string() + " --config " + (out / "nope.cfg").string()) == 2);
    CHECK(runCli("frobnicate") == 1);
    CHECK(runCli("generate --out /proc/lanedet_cannot_write --frames 1") == 2);
  }
}
