#include "lanedet/respond.hpp"

#include <cmath>
#include <utility>

#include "lanedet/error.hpp"

namespace lanedet {

FloatMap geomMap(const NormalMap& normals, const DepthImage& depth, const Config& cfg) {
  if (normals.width() != depth.width() || normals.height() != depth.height())
    throw InputError("normal map and depth differ in size");

  const int w = depth.width(), h = depth.height();
  FloatMap g(w, h, 0.0);
  for (int j = 0; j < h; ++j) {
    const double rowTerm = cfg.beta * j / h;
    for (int i = 0; i < w; ++i) {
      // O_y = (0, 1, 0): the dot product is the normal's y component.
      const double align = normals.valid(i, j) ? cfg.alpha * std::abs(normals.normals(i, j).y()) : 0.0;
      const double d = depth.depth(i, j);
      const bool near = depth.valid(i, j) && d <= cfg.tD;
      g(i, j) = align + (near ? cfg.beta * d / cfg.tD : rowTerm);
    }
  }
  return g;
}

FloatMap fuse(const FloatMap& m, const FloatMap& g, double tauG) {
  if (!m.sameShape(g)) throw InputError("matching and geometric maps differ in size");
  FloatMap r = m;
  auto out = r.pixels();
  auto gv = g.pixels();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] >= tauG) out[i] += gv[i];
  return r;
}

RespondMaps respondMaps(const FloatMap& mLeft, const FloatMap& mRight, FloatMap g, double tauG) {
  RespondMaps maps{fuse(mLeft, g, tauG), fuse(mRight, g, tauG), {}};
  maps.g = std::move(g);
  return maps;
}

}  // namespace lanedet
