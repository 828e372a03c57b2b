// lanebench: generate synthetic RGB-D lane datasets, run the detector, score and time it.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lanedet/config.hpp"
#include "lanedet/dataset.hpp"
#include "lanedet/error.hpp"
#include "lanedet/evaluate.hpp"
#include "lanedet/pgm.hpp"
#include "lanedet/pipeline.hpp"
#include "lanedet/synthgen.hpp"

namespace fs = std::filesystem;
using namespace lanedet;

namespace {

Config loadConfig(const std::string& path) { return path.empty() ? Config{} : parseConfig(path); }

int runGenerate(const std::string& out, int frames, long long seed, const std::string& scene) {
  SceneSpec spec = sceneByName(scene);
  if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
  makeDataset(spec, frames, out);
  std::printf("wrote %d %s frames to %s\n", frames, scene.c_str(), out.c_str());
  return 0;
}

int runDetect(const std::string& dataset, const std::string& configPath, const std::string& out, bool overlay,
              bool feedback, int workers) {
  const Config cfg = loadConfig(configPath);
  const auto results = runPipeline(dataset, cfg, {feedback, workers});
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out);
  writeResults(fs::path(out) / "results.csv", results);
  if (overlay) {
    const CameraIntrinsics camera = readCamera(dataset);
    for (const auto& r : results) {
      const Frame frame = loadFrame(dataset, r.frameIndex, camera);
      saveGray(fs::path(out) / (frameStem(r.frameIndex) + ".overlay.pgm"), drawOverlay(frame.gray, r));
    }
  }
  int detected = 0;
  for (const auto& r : results) detected += r.detected();
  std::printf("%d/%zu frames detected; results in %s\n", detected, results.size(),
              (fs::path(out) / "results.csv").c_str());
  return 0;
}

int runEval(const std::string& dataset, const std::string& configPath, bool feedback, int workers) {
  const Config cfg = loadConfig(configPath);
  const auto results = runPipeline(dataset, cfg, {feedback, workers});
  std::cout << formatEvalReport(evaluate(results, dataset, cfg.tolerancePx, cfg.toleranceDeg));
  return 0;
}

int runBench(const std::string& dataset, const std::string& configPath) {
  const Config cfg = loadConfig(configPath);
  std::cout << benchReport(runPipeline(dataset, cfg));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RGB-D lane marker detection toolbench"};
  app.require_subcommand(1);

  std::string out, configPath, dataset, scene = "clean";
  int frames = 200, workers = 1;
  long long seed = -1;
  bool overlay = false, noFeedback = false;

  auto* generate = app.add_subcommand("generate", "render a synthetic dataset");
  generate->add_option("--out", out, "output directory")->required();
  generate->add_option("--frames", frames, "number of frames")->check(CLI::PositiveNumber);
  generate->add_option("--seed", seed, "noise and jitter seed");
  generate->add_option("--scene", scene, "clean | fog | obstacle | dashed");

  auto* detect = app.add_subcommand("detect", "run the detector over a dataset");
  detect->add_option("dataset", dataset, "dataset directory")->required();
  detect->add_option("--config", configPath, "config file");
  detect->add_option("--out", out, "output directory")->required();
  detect->add_flag("--overlay", overlay, "write overlay images");
  detect->add_flag("--no-feedback", noFeedback, "disable template-angle feedback");
  detect->add_option("--workers", workers, "parallel workers (needs --no-feedback)")->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("eval", "detect and score against ground truth");
  eval->add_option("dataset", dataset, "dataset directory")->required();
  eval->add_option("--config", configPath, "config file");
  eval->add_flag("--no-feedback", noFeedback, "disable template-angle feedback");
  eval->add_option("--workers", workers, "parallel workers (needs --no-feedback)")->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "per-stage timing report");
  bench->add_option("dataset", dataset, "dataset directory")->required();
  bench->add_option("--config", configPath, "config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*generate) return runGenerate(out, frames, seed, scene);
    if (*detect) return runDetect(dataset, configPath, out, overlay, !noFeedback, workers);
    if (*eval) return runEval(dataset, configPath, !noFeedback, workers);
    if (*bench) return runBench(dataset, configPath);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
