#include "lanedet/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lanedet/error.hpp"
#include "lanedet/pgm.hpp"

namespace lanedet {

namespace fs = std::filesystem;

std::string frameStem(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06d", index);
  return buf;
}

FramePaths framePaths(const fs::path& dir, int index) {
  const std::string stem = frameStem(index);
  return {dir / (stem + ".gray.pgm"), dir / (stem + ".depth.pgm"), dir / (stem + ".mask.pgm"),
          dir / (stem + ".plane.txt")};
}

void writeCamera(const fs::path& dir, const CameraIntrinsics& camera) {
  std::ofstream out(dir / "camera.txt");
  if (!out) throw IoError("cannot write " + (dir / "camera.txt").string());
  char line[256];
  std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %d %d\n", camera.fx, camera.fy, camera.cx,
                camera.cy, camera.width, camera.height);
  out << line;
}

CameraIntrinsics readCamera(const fs::path& dir) {
  std::ifstream in(dir / "camera.txt");
  if (!in) throw InputError("dataset " + dir.string() + " has no camera.txt");
  CameraIntrinsics cam;
  if (!(in >> cam.fx >> cam.fy >> cam.cx >> cam.cy >> cam.width >> cam.height))
    throw FormatError("malformed camera.txt in " + dir.string());
  try {
    cam.validate();
  } catch (const ParameterError& e) {
    throw InputError(std::string("camera.txt: ") + e.what());
  }
  return cam;
}

std::vector<int> listFrames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a dataset directory: " + dir.string());
  std::vector<int> indices;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() != 15 || !name.ends_with(".gray.pgm")) continue;
    const std::string stem = name.substr(0, 6);
    if (!std::ranges::all_of(stem, [](char c) { return c >= '0' && c <= '9'; })) continue;
    int index = std::stoi(stem);
    if (!fs::exists(framePaths(dir, index).depth))
      throw InputError("frame " + stem + " has no depth image");
    indices.push_back(index);
  }
  if (indices.empty()) throw InputError("no frames in " + dir.string());
  std::ranges::sort(indices);
  return indices;
}

Frame loadFrame(const fs::path& dir, int index, const CameraIntrinsics& camera) {
  auto paths = framePaths(dir, index);
  return loadFramePair(paths.gray, paths.depth, camera);
}

void saveFrame(const fs::path& dir, int index, const Frame& frame) {
  auto paths = framePaths(dir, index);
  saveGray(paths.gray, frame.gray);
  saveDepth(paths.depth, frame.depth);
}

void saveGroundTruth(const fs::path& dir, int index, const GroundTruth& truth) {
  auto paths = framePaths(dir, index);
  GrayImage encoded(truth.markerMask.width(), truth.markerMask.height());
  for (int y = 0; y < encoded.height(); ++y)
    for (int x = 0; x < encoded.width(); ++x)
      encoded(x, y) = truth.markerMask(x, y) ? 255 : truth.obstacleMask(x, y) ? 128 : 0;
  saveGray(paths.mask, encoded);

  std::ofstream out(paths.plane);
  if (!out) throw IoError("cannot write " + paths.plane.string());
  out << formatPlane(truth.plane) << '\n';
}

GroundTruth loadGroundTruth(const fs::path& dir, int index) {
  auto paths = framePaths(dir, index);
  if (!fs::exists(paths.mask) || !fs::exists(paths.plane))
    throw InputError("frame " + frameStem(index) + " has no ground truth");

  GrayImage encoded = loadGray(paths.mask);
  GroundTruth truth{Mask(encoded.width(), encoded.height()), Mask(encoded.width(), encoded.height()), {}};
  for (int y = 0; y < encoded.height(); ++y) {
    for (int x = 0; x < encoded.width(); ++x) {
      truth.markerMask(x, y) = encoded(x, y) == 255;
      truth.obstacleMask(x, y) = encoded(x, y) == 128;
    }
  }

  std::ifstream in(paths.plane);
  std::string line;
  if (!in || !std::getline(in, line)) throw IoError("cannot read " + paths.plane.string());
  truth.plane = parsePlane(line);
  return truth;
}

}  // namespace lanedet
