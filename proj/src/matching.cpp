#include "lanedet/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "lanedet/error.hpp"

namespace lanedet {
namespace {

GrayImage rasterizeStripe(int size, double theta, int stripeWidth) {
  GrayImage px(size, size, 0);
  const double c = size / 2.0;
  const double s = std::sin(theta), k = std::cos(theta);
  const double limit = stripeWidth / 2.0 + 1e-9;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - c, dy = y + 0.5 - c;
      if (std::abs(dx * s - dy * k) <= limit) px(x, y) = 255;
    }
  }
  return px;
}

GrayImage mirrorColumns(const GrayImage& in) {
  GrayImage out(in.width(), in.height());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) out(in.width() - 1 - x, y) = in(x, y);
  return out;
}

// Half-open column runs [begin, end) of bright pixels, per template row.
std::vector<std::vector<std::pair<int, int>>> brightRuns(const GrayImage& t) {
  std::vector<std::vector<std::pair<int, int>>> runs(t.height());
  for (int y = 0; y < t.height(); ++y) {
    int x = 0;
    while (x < t.width()) {
      if (t(x, y) == 0) {
        ++x;
        continue;
      }
      int begin = x;
      while (x < t.width() && t(x, y) != 0) ++x;
      runs[y].emplace_back(begin, x);
    }
  }
  return runs;
}

}  // namespace

const char* toString(Side side) { return side == Side::Left ? "left" : "right"; }

Template makeTemplate(int size, double theta, int stripeWidth, Side side) {
  if (size <= 0) throw ParameterError("template size must be positive");
  if (stripeWidth <= 0 || stripeWidth >= size) throw ParameterError("stripe width must lie in (0, size)");
  if (!(theta > 0 && theta < std::numbers::pi)) throw ParameterError("template angle must lie in (0, pi)");

  Template t;
  t.stripeWidth_ = stripeWidth;
  t.side_ = side;
  t.leftTheta_ = theta;
  GrayImage stripe = rasterizeStripe(size, theta, stripeWidth);
  if (side == Side::Left) {
    t.theta_ = theta;
    t.pixels_ = std::move(stripe);
  } else {
    t.theta_ = std::numbers::pi - theta;
    t.pixels_ = mirrorColumns(stripe);
  }
  return t;
}

Template rotateTemplate(const Template& t, double newTheta) {
  if (newTheta == t.theta()) return t;
  const double leftTheta = t.side() == Side::Left ? newTheta : std::numbers::pi - newTheta;
  return makeTemplate(t.size(), leftTheta, t.stripeWidth(), t.side());
}

FloatMap nccMatch(const GrayImage& image, const Template& t, double floor) {
  const int size = t.size();
  const int w = image.width(), h = image.height();
  if (size > w || size > h) throw InputError("template larger than image");

  FloatMap out(w, h, 0.0);
  const std::int64_t n = static_cast<std::int64_t>(size) * size;

  // Template statistics. Pixels are 0 or 255, so sum(T * I) = 255 * (sum of I over bright pixels).
  std::int64_t sumT = 0, sumTT = 0;
  for (std::uint8_t v : t.pixels().pixels()) {
    sumT += v;
    sumTT += static_cast<std::int64_t>(v) * v;
  }
  const std::int64_t varT = n * sumTT - sumT * sumT;
  if (varT == 0) return out;
  const auto runs = brightRuns(t.pixels());

  // Integral images for patch mean and energy.
  const int stride = w + 1;
  std::vector<std::int64_t> integral(static_cast<std::size_t>(stride) * (h + 1), 0);
  std::vector<std::int64_t> integralSq(static_cast<std::size_t>(stride) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::int64_t rowSum = 0, rowSq = 0;
    for (int x = 0; x < w; ++x) {
      const std::int32_t v = image(x, y);
      rowSum += v;
      rowSq += v * v;
      const std::size_t at = static_cast<std::size_t>(y + 1) * stride + x + 1;
      integral[at] = integral[at - stride] + rowSum;
      integralSq[at] = integralSq[at - stride] + rowSq;
    }
  }
  auto boxSum = [&](const std::vector<std::int64_t>& ii, int x, int y) {
    const std::size_t top = static_cast<std::size_t>(y) * stride, bottom = static_cast<std::size_t>(y + size) * stride;
    return ii[bottom + x + size] - ii[bottom + x] - ii[top + x + size] + ii[top + x];
  };

  const int placements = w - size + 1, placementRows = h - size + 1;
  const double tNorm = std::sqrt(static_cast<double>(varT));
  const int offset = size / 2;

  // Bright-run sums for every placement. Half-binary inputs are mostly zero, so
  // scattering each nonzero pixel into per-row difference arrays is far cheaper
  // than gathering runs at every placement; both give the same integers.
  std::size_t nonzero = 0;
  for (std::uint8_t v : image.pixels()) nonzero += v != 0;
  std::vector<std::int32_t> stripe(static_cast<std::size_t>(placements) * placementRows, 0);
  if (nonzero * 4 < image.size()) {
    const int dstride = placements + 1;
    std::vector<std::int32_t> diff(static_cast<std::size_t>(dstride) * placementRows, 0);
    for (int py = 0; py < h; ++py) {
      auto row = image.row(py);
      for (int px = 0; px < w; ++px) {
        const std::int32_t v = row[px];
        if (v == 0) continue;
        for (int k = std::max(0, py - placementRows + 1); k <= std::min(size - 1, py); ++k) {
          std::int32_t* d = &diff[static_cast<std::size_t>(py - k) * dstride];
          for (auto [begin, end] : runs[k]) {
            const int lo = std::max(0, px - end + 1), hi = std::min(placements, px - begin + 1);
            if (lo >= hi) continue;
            d[lo] += v;
            d[hi] -= v;
          }
        }
      }
    }
    for (int y = 0; y < placementRows; ++y) {
      const std::int32_t* d = &diff[static_cast<std::size_t>(y) * dstride];
      std::int32_t* out = &stripe[static_cast<std::size_t>(y) * placements];
      std::int32_t acc = 0;
      for (int x = 0; x < placements; ++x) out[x] = acc += d[x];
    }
  } else {
    std::vector<std::int32_t> rowPrefix(static_cast<std::size_t>(stride) * h, 0);
    for (int y = 0; y < h; ++y) {
      std::int32_t* pre = &rowPrefix[static_cast<std::size_t>(y) * stride];
      for (int x = 0; x < w; ++x) pre[x + 1] = pre[x] + image(x, y);
    }
    for (int y = 0; y < placementRows; ++y) {
      std::int32_t* stripeSum = &stripe[static_cast<std::size_t>(y) * placements];
      for (int k = 0; k < size; ++k) {
        const std::int32_t* pre = &rowPrefix[static_cast<std::size_t>(y + k) * stride];
        for (auto [begin, end] : runs[k]) {
          const std::int32_t* hi = pre + end;
          const std::int32_t* lo = pre + begin;
          for (int x = 0; x < placements; ++x) stripeSum[x] += hi[x] - lo[x];
        }
      }
    }
  }

  for (int y = 0; y < placementRows; ++y) {
    const std::int32_t* stripeSum = &stripe[static_cast<std::size_t>(y) * placements];
    auto outRow = out.row(y + offset);
    for (int x = 0; x < placements; ++x) {
      const std::int64_t sumI = boxSum(integral, x, y);
      const std::int64_t varI = n * boxSum(integralSq, x, y) - sumI * sumI;
      double score = 0.0;
      if (varI > 0) {
        const std::int64_t num = n * 255 * static_cast<std::int64_t>(stripeSum[x]) - sumT * sumI;
        score = std::min(1.0, static_cast<double>(num) / (tNorm * std::sqrt(static_cast<double>(varI))));
      }
      outRow[x + offset] = std::max(score, floor);
    }
  }
  return out;
}

}  // namespace lanedet
