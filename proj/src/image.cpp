#include "lanedet/image.hpp"

#include <cmath>
#include <string>

#include "lanedet/error.hpp"

namespace lanedet {

void CameraIntrinsics::validate() const {
  if (!(fx > 0) || !(fy > 0) || !std::isfinite(fx) || !std::isfinite(fy))
    throw ParameterError("focal lengths must be positive");
  if (width <= 0 || height <= 0) throw ParameterError("raster size must be positive");
  if (!(cx >= 0 && cx < width) || !(cy >= 0 && cy < height))
    throw ParameterError("principal point (" + std::to_string(cx) + ", " + std::to_string(cy) +
                         ") outside the raster");
}

void DepthImage::set(int x, int y, double meters) {
  if (std::isfinite(meters) && meters > 0) {
    meters_(x, y) = meters;
    valid_(x, y) = 1;
  } else {
    meters_(x, y) = 0.0;
    valid_(x, y) = 0;
  }
}

}  // namespace lanedet
