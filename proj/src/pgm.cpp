#include "lanedet/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "lanedet/error.hpp"

namespace lanedet {
namespace {

class HeaderReader {
 public:
  HeaderReader(std::string_view bytes, std::vector<std::string>& comments)
      : bytes_(bytes), comments_(comments) {}

  int number(const char* field) {
    skipSpaceAndComments();
    std::size_t begin = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (begin == pos_) throw FormatError(std::string("PGM header: expected ") + field);
    int value = 0;
    auto [ptr, ec] = std::from_chars(bytes_.data() + begin, bytes_.data() + pos_, value);
    if (ec != std::errc()) throw FormatError(std::string("PGM header: bad ") + field);
    return value;
  }

  std::size_t position() const { return pos_; }
  void advance() { ++pos_; }
  bool atSpace() const {
    return pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]));
  }

 private:
  void skipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      char c = bytes_[pos_];
      if (c == '#') {
        std::size_t end = bytes_.find('\n', pos_);
        if (end == std::string_view::npos) throw FormatError("PGM header: unterminated comment");
        comments_.emplace_back(bytes_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::vector<std::string>& comments_;
  std::size_t pos_ = 2;
};

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void writeFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

PgmImage decodePgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw FormatError("not a binary PGM (missing P5 magic)");

  PgmImage image;
  HeaderReader header(bytes, image.comments);
  image.width = header.number("width");
  image.height = header.number("height");
  image.maxval = header.number("maxval");
  if (image.width <= 0 || image.height <= 0) throw FormatError("PGM header: empty raster");
  if (image.maxval <= 0 || image.maxval > 65535) throw FormatError("PGM header: maxval out of range");
  if (!header.atSpace()) throw FormatError("PGM header: missing separator after maxval");
  header.advance();

  const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
  const std::size_t bytesPerSample = image.maxval < 256 ? 1 : 2;
  const std::size_t offset = header.position();
  if (bytes.size() - offset != count * bytesPerSample)
    throw FormatError("PGM payload size " + std::to_string(bytes.size() - offset) + " does not match " +
                      std::to_string(count * bytesPerSample));

  image.samples.resize(count);
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint16_t v = bytesPerSample == 1 ? raw[i] : static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    if (v > image.maxval) throw FormatError("PGM sample exceeds maxval");
    image.samples[i] = v;
  }
  return image;
}

std::string encodePgm(const PgmImage& image) {
  std::ostringstream header;
  header << "P5\n";
  for (const auto& c : image.comments) header << '#' << c << '\n';
  header << image.width << ' ' << image.height << '\n' << image.maxval << '\n';

  std::string bytes = header.str();
  const bool wide = image.maxval >= 256;
  bytes.reserve(bytes.size() + image.samples.size() * (wide ? 2 : 1));
  for (std::uint16_t v : image.samples) {
    if (wide) bytes.push_back(static_cast<char>(v >> 8));
    bytes.push_back(static_cast<char>(v & 0xff));
  }
  return bytes;
}

PgmImage readPgm(const std::filesystem::path& path) { return decodePgm(readFile(path)); }

void writePgm(const std::filesystem::path& path, const PgmImage& image) {
  writeFile(path, encodePgm(image));
}

GrayImage loadGray(const std::filesystem::path& path) {
  PgmImage pgm = readPgm(path);
  if (pgm.maxval != 255) throw FormatError(path.string() + ": gray image must have maxval 255");
  GrayImage gray(pgm.width, pgm.height);
  std::ranges::transform(pgm.samples, gray.pixels().begin(),
                         [](std::uint16_t v) { return static_cast<std::uint8_t>(v); });
  return gray;
}

void saveGray(const std::filesystem::path& path, const GrayImage& image) {
  PgmImage pgm{image.width(), image.height(), 255, {}, {}};
  pgm.samples.assign(image.pixels().begin(), image.pixels().end());
  writePgm(path, pgm);
}

DepthImage loadDepth(const std::filesystem::path& path) {
  PgmImage pgm = readPgm(path);
  if (pgm.maxval != 65535) throw FormatError(path.string() + ": depth image must have maxval 65535");
  DepthImage depth(pgm.width, pgm.height);
  for (int y = 0; y < pgm.height; ++y)
    for (int x = 0; x < pgm.width; ++x)
      depth.set(x, y, pgm.samples[static_cast<std::size_t>(y) * pgm.width + x] / 1000.0);
  return depth;
}

void saveDepth(const std::filesystem::path& path, const DepthImage& depth) {
  PgmImage pgm{depth.width(), depth.height(), 65535, {}, {}};
  pgm.samples.reserve(static_cast<std::size_t>(depth.width()) * depth.height());
  for (int y = 0; y < depth.height(); ++y) {
    for (int x = 0; x < depth.width(); ++x) {
      long mm = depth.valid(x, y) ? std::lround(depth.depth(x, y) * 1000.0) : 0;
      pgm.samples.push_back(static_cast<std::uint16_t>(std::clamp(mm, 0L, 65535L)));
    }
  }
  writePgm(path, pgm);
}

Frame loadFramePair(const std::filesystem::path& grayPath, const std::filesystem::path& depthPath,
                    const CameraIntrinsics& camera) {
  Frame frame{loadGray(grayPath), loadDepth(depthPath), camera};
  if (!frame.depth.sameShape(frame.gray))
    throw InputError("gray " + std::to_string(frame.gray.width()) + "x" + std::to_string(frame.gray.height()) +
                     " and depth " + std::to_string(frame.depth.width()) + "x" +
                     std::to_string(frame.depth.height()) + " differ in size");
  if (camera.width != frame.gray.width() || camera.height != frame.gray.height())
    throw InputError("camera raster size does not match " + grayPath.string());
  return frame;
}

void saveFloatMap(const FloatMap& map, const std::filesystem::path& path) {
  double scale = 0.0;
  for (double v : map.pixels()) scale = std::max(scale, v);

  char comment[64];
  std::snprintf(comment, sizeof comment, " scale=%.17g", scale);
  PgmImage pgm{map.width(), map.height(), 65535, {comment}, {}};
  pgm.samples.reserve(map.size());
  for (double v : map.pixels()) {
    double q = scale > 0 ? std::round(std::clamp(v, 0.0, scale) / scale * 65535.0) : 0.0;
    pgm.samples.push_back(static_cast<std::uint16_t>(q));
  }
  writePgm(path, pgm);
}

FloatMap loadFloatMap(const std::filesystem::path& path) {
  PgmImage pgm = readPgm(path);
  double scale = -1.0;
  for (const auto& c : pgm.comments) {
    auto at = c.find("scale=");
    if (at != std::string::npos) scale = std::strtod(c.c_str() + at + 6, nullptr);
  }
  if (scale < 0 || pgm.maxval != 65535) throw FormatError(path.string() + ": not a saved float map");
  FloatMap map(pgm.width, pgm.height);
  std::ranges::transform(pgm.samples, map.pixels().begin(),
                         [scale](std::uint16_t v) { return v / 65535.0 * scale; });
  return map;
}

}  // namespace lanedet
