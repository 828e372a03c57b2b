#include "lanedet/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "lanedet/error.hpp"

namespace lanedet {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Nearest positive entry distance of the ray t * dir into the box, or +inf.
double hitBox(const Eigen::Vector3d& dir, const ObstacleBox& box) {
  double tNear = 0, tFar = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double lo = box.center[a] - box.size[a] / 2, hi = box.center[a] + box.size[a] / 2;
    if (dir[a] == 0) {
      if (lo > 0 || hi < 0) return std::numeric_limits<double>::infinity();
      continue;
    }
    double t0 = lo / dir[a], t1 = hi / dir[a];
    if (t0 > t1) std::swap(t0, t1);
    tNear = std::max(tNear, t0);
    tFar = std::min(tFar, t1);
  }
  return tNear <= tFar && tNear > 0 ? tNear : std::numeric_limits<double>::infinity();
}

bool onMarker(const SceneSpec& spec, const Eigen::Vector3d& hit, double vehicleOffset) {
  const double half = spec.markerWidth / 2;
  const double c = spec.laneWidth / 2;
  if (std::abs(hit.x() - c) > half && std::abs(hit.x() + c) > half) return false;
  if (spec.markerStyle == MarkerStyle::Solid) return true;
  const double period = spec.dashLength + spec.gapLength;
  double phase = std::fmod(hit.z() + vehicleOffset, period);
  if (phase < 0) phase += period;
  return phase < spec.dashLength;
}

}  // namespace

CameraIntrinsics SceneSpec::defaultIntrinsics() { return {525.0, 525.0, 319.5, 239.5, 640, 480}; }

void SceneSpec::validate() const {
  intrinsics.validate();
  if (!(cameraHeight > 0)) throw ParameterError("camera height must be positive");
  if (!(markerWidth > 0) || !(laneWidth > markerWidth)) throw ParameterError("need laneWidth > markerWidth > 0");
  if (markerStyle == MarkerStyle::Dashed && (!(dashLength > 0) || !(gapLength >= 0)))
    throw ParameterError("dash length must be positive");
  if (intensitySigma < 0 || depthSigma < 0 || fogDensity < 0) throw ParameterError("noise levels must be >= 0");
  if (std::abs(cameraPitch) >= std::numbers::pi / 2) throw ParameterError("pitch out of range");
  for (const auto& box : obstacles)
    if (!(box.size.minCoeff() > 0)) throw ParameterError("obstacle boxes need positive size");
}

SceneSpec cleanScene() { return {}; }

SceneSpec fogScene() {
  SceneSpec s;
  s.fogDensity = 0.08;
  s.intensitySigma = 8.0;
  s.depthSigma = 0.01;
  return s;
}

SceneSpec obstacleScene() {
  SceneSpec s;
  // A 1.5 m cube resting on the road, offset toward the right marker.
  s.obstacles.push_back({{0.3, s.cameraHeight - 0.75, 12.0}, {1.5, 1.5, 1.5}});
  return s;
}

SceneSpec dashedScene() {
  SceneSpec s;
  s.markerStyle = MarkerStyle::Dashed;
  return s;
}

SceneSpec sceneByName(const std::string& name) {
  if (name == "clean") return cleanScene();
  if (name == "fog") return fogScene();
  if (name == "obstacle") return obstacleScene();
  if (name == "dashed") return dashedScene();
  throw InputError("unknown scene '" + name + "' (expected clean, fog, obstacle or dashed)");
}

RenderedFrame renderFrame(const SceneSpec& spec, double vehicleOffset, double headingJitter,
                          std::uint64_t noiseStream) {
  spec.validate();
  const CameraIntrinsics& cam = spec.intrinsics;
  const int w = cam.width, h = cam.height;

  // Camera axes in the road frame: pitch about x, then yaw about y.
  const double cp = std::cos(spec.cameraPitch), sp = std::sin(spec.cameraPitch);
  Eigen::Matrix3d pitch;
  pitch.col(0) = Eigen::Vector3d(1, 0, 0);
  pitch.col(1) = Eigen::Vector3d(0, cp, -sp);
  pitch.col(2) = Eigen::Vector3d(0, sp, cp);
  const double cy = std::cos(headingJitter), sy = std::sin(headingJitter);
  Eigen::Matrix3d yaw;
  yaw << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  const Eigen::Matrix3d rotation = yaw * pitch;

  RenderedFrame out{Frame{GrayImage(w, h), DepthImage(w, h), cam},
                    GroundTruth{Mask(w, h, 0), Mask(w, h, 0), {}}};
  Raster<double> tone(w, h, kSkyTone);

  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const Eigen::Vector3d dir = rotation * cam.ray(u, v);
      double tRoad = dir.y() > 0 ? spec.cameraHeight / dir.y() : std::numeric_limits<double>::infinity();
      double tBox = std::numeric_limits<double>::infinity();
      for (const auto& box : spec.obstacles) tBox = std::min(tBox, hitBox(dir, box));

      double t = std::min(tRoad, tBox);
      if (!std::isfinite(t)) {
        tone(u, v) = spec.fogDensity > 0 ? 128.0 : kSkyTone;
        continue;
      }
      double surface = kObstacleTone;
      if (tBox < tRoad) {
        out.truth.obstacleMask(u, v) = 1;
      } else if (onMarker(spec, tRoad * dir, vehicleOffset)) {
        surface = kMarkerTone;
        out.truth.markerMask(u, v) = 1;
      } else {
        surface = kRoadTone;
      }
      const double transmission = std::exp(-spec.fogDensity * t);
      tone(u, v) = surface * transmission + 128.0 * (1.0 - transmission);
      // The ray direction has unit z in the camera frame, so t is the z-depth.
      if (t <= kSensorRange) out.frame.depth.set(u, v, t);
    }
  }

  std::mt19937_64 rng(splitmix(spec.seed ^ splitmix(noiseStream + 1)));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      double g = tone(u, v);
      if (spec.intensitySigma > 0) g += spec.intensitySigma * normal(rng);
      out.frame.gray(u, v) = static_cast<std::uint8_t>(std::clamp(std::round(g), 0.0, 255.0));
    }
  }
  if (spec.depthSigma > 0) {
    for (int v = 0; v < h; ++v)
      for (int u = 0; u < w; ++u)
        if (out.frame.depth.valid(u, v))
          out.frame.depth.set(u, v, out.frame.depth.depth(u, v) + spec.depthSigma * normal(rng));
  }

  // Road normal is the road frame's +y expressed in camera coordinates; yaw leaves it unchanged.
  out.truth.plane.normal = rotation.transpose() * Eigen::Vector3d::UnitY();
  out.truth.plane.point = rotation.transpose() * Eigen::Vector3d(0, spec.cameraHeight, 0);
  return out;
}

double datasetOffset(const SceneSpec& spec, int index) { return index * spec.advancePerFrame; }

double datasetJitter(const SceneSpec& spec, int index) {
  const std::uint64_t bits = splitmix(spec.seed * 0x2545f4914f6cdd1dULL + static_cast<std::uint64_t>(index));
  const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
  return (2.0 * unit - 1.0) * spec.headingJitter;
}

std::string makeDataset(const SceneSpec& spec, int frames, const std::filesystem::path& outDir) {
  if (frames < 1) throw InputError("frames must be >= 1");
  spec.validate();
  std::error_code ec;
  std::filesystem::create_directories(outDir, ec);
  if (ec || !std::filesystem::is_directory(outDir)) throw IoError("cannot create " + outDir.string());

  std::ostringstream manifest;
  char line[256];
  manifest << "# synthetic lane dataset\n";
  manifest << "frames " << frames << '\n' << "seed " << spec.seed << '\n';
  std::snprintf(line, sizeof line,
                "cameraHeight %.6f\ncameraPitch %.9f\nlaneWidth %.6f\nmarkerWidth %.6f\nmarkerStyle %s\n"
                "dashLength %.6f\ngapLength %.6f\nintensitySigma %.6f\ndepthSigma %.6f\nfogDensity %.6f\n",
                spec.cameraHeight, spec.cameraPitch, spec.laneWidth, spec.markerWidth,
                spec.markerStyle == MarkerStyle::Solid ? "solid" : "dashed", spec.dashLength, spec.gapLength,
                spec.intensitySigma, spec.depthSigma, spec.fogDensity);
  manifest << line;
  for (const auto& box : spec.obstacles) {
    std::snprintf(line, sizeof line, "obstacle %.6f %.6f %.6f %.6f %.6f %.6f\n", box.center.x(), box.center.y(),
                  box.center.z(), box.size.x(), box.size.y(), box.size.z());
    manifest << line;
  }

  writeCamera(outDir, spec.intrinsics);
  for (int i = 0; i < frames; ++i) {
    const double offset = datasetOffset(spec, i), jitter = datasetJitter(spec, i);
    RenderedFrame rendered = renderFrame(spec, offset, jitter, static_cast<std::uint64_t>(i));
    saveFrame(outDir, i, rendered.frame);
    saveGroundTruth(outDir, i, rendered.truth);
    std::snprintf(line, sizeof line, "frame %s offset %.6f jitter %.9f\n", frameStem(i).c_str(), offset, jitter);
    manifest << line;
  }

  const std::string text = manifest.str();
  std::ofstream out(outDir / "manifest.txt");
  if (!out || !(out << text)) throw IoError("cannot write manifest in " + outDir.string());
  return text;
}

}  // namespace lanedet
