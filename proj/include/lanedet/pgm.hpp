#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lanedet/image.hpp"

namespace lanedet {

/// Binary (P5) PGM payload. Samples are widened to 16 bits regardless of maxval.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::string> comments;  ///< text following '#', without the newline
  std::vector<std::uint16_t> samples;

  bool operator==(const PgmImage&) const = default;
};

/// Parses a P5 byte stream. Throws FormatError on anything malformed.
PgmImage decodePgm(std::string_view bytes);

/// Canonical encoding: magic, comment lines, "W H", maxval, one newline, big-endian samples.
std::string encodePgm(const PgmImage& image);

PgmImage readPgm(const std::filesystem::path& path);
void writePgm(const std::filesystem::path& path, const PgmImage& image);

GrayImage loadGray(const std::filesystem::path& path);
void saveGray(const std::filesystem::path& path, const GrayImage& image);

/// 16-bit millimeter depth; zero marks an invalid pixel.
DepthImage loadDepth(const std::filesystem::path& path);
void saveDepth(const std::filesystem::path& path, const DepthImage& depth);

/// Reads a registered gray/depth pair. Both rasters must match each other and the camera.
Frame loadFramePair(const std::filesystem::path& grayPath, const std::filesystem::path& depthPath,
                    const CameraIntrinsics& camera);

/// Writes a 16-bit PGM quantizing [0, max(map)] linearly onto [0, 65535].
/// The scale is kept in a `# scale=<max>` header comment.
void saveFloatMap(const FloatMap& map, const std::filesystem::path& path);
FloatMap loadFloatMap(const std::filesystem::path& path);

}  // namespace lanedet
