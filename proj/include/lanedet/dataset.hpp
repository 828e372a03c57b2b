#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lanedet/image.hpp"
#include "lanedet/lanefit.hpp"

namespace lanedet {

/// Per-pixel evaluation oracle rendered alongside each synthetic frame.
struct GroundTruth {
  Mask markerMask;    ///< 1 where lane paint is visible
  Mask obstacleMask;  ///< 1 where an obstacle is visible; disjoint from markerMask
  LanePlane plane;    ///< analytic road plane in camera coordinates
};

/// Files of one frame inside a dataset directory:
/// NNNNNN.gray.pgm, NNNNNN.depth.pgm and optionally NNNNNN.mask.pgm, NNNNNN.plane.txt.
struct FramePaths {
  std::filesystem::path gray, depth, mask, plane;
};

std::string frameStem(int index);
FramePaths framePaths(const std::filesystem::path& dir, int index);

/// `camera.txt` holds one line: `fx fy cx cy width height`.
void writeCamera(const std::filesystem::path& dir, const CameraIntrinsics& camera);
CameraIntrinsics readCamera(const std::filesystem::path& dir);

/// Indices of every frame with both gray and depth files, ascending.
/// Throws InputError for a missing directory, an empty dataset, or a gray file without depth.
std::vector<int> listFrames(const std::filesystem::path& dir);

Frame loadFrame(const std::filesystem::path& dir, int index, const CameraIntrinsics& camera);
void saveFrame(const std::filesystem::path& dir, int index, const Frame& frame);

/// Mask file encoding: 0 background, 255 marker, 128 obstacle.
void saveGroundTruth(const std::filesystem::path& dir, int index, const GroundTruth& truth);
GroundTruth loadGroundTruth(const std::filesystem::path& dir, int index);

}  // namespace lanedet
