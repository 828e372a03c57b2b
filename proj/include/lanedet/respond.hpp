#pragma once

#include "lanedet/config.hpp"
#include "lanedet/image.hpp"
#include "lanedet/preprocess.hpp"

namespace lanedet {

/// Fused left/right respond maps plus the shared geometric map they were built from.
struct RespondMaps {
  FloatMap left;
  FloatMap right;
  FloatMap g;
};

/// Geometric feature map. Pixels with valid depth within `cfg.tD` score
/// alpha * |n . O_y| + beta * D / tD; all others use beta * row / height for the
/// second term. Invalid normals contribute 0 to the first term.
FloatMap geomMap(const NormalMap& normals, const DepthImage& depth, const Config& cfg);

/// R = M where M < tauG, otherwise M + G. No renormalization.
FloatMap fuse(const FloatMap& m, const FloatMap& g, double tauG);

RespondMaps respondMaps(const FloatMap& mLeft, const FloatMap& mRight, FloatMap g, double tauG);

}  // namespace lanedet
