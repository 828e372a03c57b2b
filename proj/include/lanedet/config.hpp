#pragma once

#include <filesystem>
#include <string_view>

namespace lanedet {

/// Detector parameters. Defaults are the values the method was evaluated with,
/// plus a few artifact knobs (template slant, evaluation tolerances).
struct Config {
  int tauC = 160;          ///< half-binary threshold (gray levels)
  int templateSize = 32;   ///< square template side (pixels)
  int falsWindow = 5;      ///< normal-estimation window side (pixels, odd)
  double tD = 20.0;        ///< depth threshold T_D (meters)
  double alpha = 0.4;      ///< weight of the normal-alignment term in G
  double beta = 0.1;       ///< weight of the depth/row term in G
  double tauG = 0.5;       ///< matching score above which G is added
  double jumpStep = 5.0;   ///< sliding-box step r (pixels); key `r`
  double pPca = 0.75;      ///< respond-value threshold for enhancement
  double nccFloor = 0.0;   ///< lower clamp on NCC scores

  double thetaLeftDeg = 110.0;  ///< initial left-template slant; right is mirrored
  int stripeWidth = 0;          ///< template stripe width, 0 = templateSize / 4
  bool falsUseZDepth = false;   ///< use z instead of range in the normal fit
  double tolerancePx = 5.0;     ///< evaluation: chain-to-marker distance
  double toleranceDeg = 5.0;    ///< evaluation: plane normal angle

  int effectiveStripeWidth() const { return stripeWidth > 0 ? stripeWidth : templateSize / 4; }

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;

  bool operator==(const Config&) const = default;
};

/// Parses `key = value` lines; `#` starts a comment. Missing keys keep their defaults.
Config parseConfigText(std::string_view text);
Config parseConfig(const std::filesystem::path& path);

}  // namespace lanedet
