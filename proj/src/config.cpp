#include "lanedet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "lanedet/error.hpp"

namespace lanedet {
namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <typename T>
T parseNumber(std::string_view v, int line) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("cannot parse '" + std::string(v) + "'", line);
  return out;
}

bool parseBool(std::string_view v, int line) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("expected a boolean, got '" + std::string(v) + "'", line);
}

using Setter = std::function<void(Config&, std::string_view, int)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"tauC", [](Config& c, std::string_view v, int l) { c.tauC = parseNumber<int>(v, l); }},
      {"templateSize", [](Config& c, std::string_view v, int l) { c.templateSize = parseNumber<int>(v, l); }},
      {"falsWindow", [](Config& c, std::string_view v, int l) { c.falsWindow = parseNumber<int>(v, l); }},
      {"tD", [](Config& c, std::string_view v, int l) { c.tD = parseNumber<double>(v, l); }},
      {"alpha", [](Config& c, std::string_view v, int l) { c.alpha = parseNumber<double>(v, l); }},
      {"beta", [](Config& c, std::string_view v, int l) { c.beta = parseNumber<double>(v, l); }},
      {"tauG", [](Config& c, std::string_view v, int l) { c.tauG = parseNumber<double>(v, l); }},
      {"r", [](Config& c, std::string_view v, int l) { c.jumpStep = parseNumber<double>(v, l); }},
      {"pPca", [](Config& c, std::string_view v, int l) { c.pPca = parseNumber<double>(v, l); }},
      {"nccFloor", [](Config& c, std::string_view v, int l) { c.nccFloor = parseNumber<double>(v, l); }},
      {"thetaLeftDeg", [](Config& c, std::string_view v, int l) { c.thetaLeftDeg = parseNumber<double>(v, l); }},
      {"stripeWidth", [](Config& c, std::string_view v, int l) { c.stripeWidth = parseNumber<int>(v, l); }},
      {"falsUseZDepth", [](Config& c, std::string_view v, int l) { c.falsUseZDepth = parseBool(v, l); }},
      {"tolerancePx", [](Config& c, std::string_view v, int l) { c.tolerancePx = parseNumber<double>(v, l); }},
      {"toleranceDeg", [](Config& c, std::string_view v, int l) { c.toleranceDeg = parseNumber<double>(v, l); }},
  };
  return table;
}

}  // namespace

void Config::validate() const {
  for (double v : {tD, alpha, beta, tauG, jumpStep, pPca, nccFloor, thetaLeftDeg, tolerancePx, toleranceDeg})
    if (!std::isfinite(v)) throw ConfigError("non-finite parameter");
  if (alpha < 0 || beta < 0) throw ConfigError("alpha and beta must be non-negative");
  if (alpha + beta > 1.0) throw ConfigError("alpha + beta must not exceed 1");
  if (!(tauG > 0 && tauG < 1)) throw ConfigError("tauG must lie in (0, 1)");
  if (!(pPca > 0 && pPca < 1)) throw ConfigError("pPca must lie in (0, 1)");
  if (templateSize < 8) throw ConfigError("templateSize must be at least 8");
  if (falsWindow < 3 || falsWindow % 2 == 0) throw ConfigError("falsWindow must be odd and >= 3");
  if (!(tD > 0)) throw ConfigError("tD must be positive");
  if (!(jumpStep > 0)) throw ConfigError("r must be positive");
  if (stripeWidth < 0 || effectiveStripeWidth() <= 0 || effectiveStripeWidth() >= templateSize)
    throw ConfigError("stripeWidth must lie in (0, templateSize)");
  if (!(thetaLeftDeg > 0 && thetaLeftDeg < 180)) throw ConfigError("thetaLeftDeg must lie in (0, 180)");
  if (!(tolerancePx > 0) || !(toleranceDeg > 0)) throw ConfigError("evaluation tolerances must be positive");
}

Config parseConfigText(std::string_view text) {
  Config cfg;
  int lineNo = 0;
  while (!text.empty()) {
    ++lineNo;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", lineNo);
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown key '" + std::string(key) + "'", lineNo);
    if (value.empty()) throw ConfigError("missing value for '" + std::string(key) + "'", lineNo);
    it->second(cfg, value, lineNo);
  }
  cfg.validate();
  return cfg;
}

Config parseConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parseConfigText(ss.str());
}

}  // namespace lanedet
