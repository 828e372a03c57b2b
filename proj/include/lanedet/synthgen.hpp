#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lanedet/dataset.hpp"
#include "lanedet/image.hpp"

namespace lanedet {

enum class MarkerStyle { Solid, Dashed };

/// Axis-aligned box in the road frame (x right, y down, z forward, origin at the camera).
/// Boxes travel with the vehicle.
struct ObstacleBox {
  Eigen::Vector3d center;
  Eigen::Vector3d size;
};

/// Straight two-marker road seen by a forward camera centered in the lane.
struct SceneSpec {
  double cameraHeight = 1.5;           ///< meters above the road
  double cameraPitch = 0.17453292519943295;  ///< radians, positive looks down (10 deg)
  double laneWidth = 1.2;              ///< distance between marker center lines, meters
  double markerWidth = 0.15;           ///< meters
  MarkerStyle markerStyle = MarkerStyle::Solid;
  double dashLength = 3.0;             ///< meters, dashed style only
  double gapLength = 3.0;              ///< meters, dashed style only
  std::vector<ObstacleBox> obstacles;
  double intensitySigma = 0.0;         ///< gray levels
  double depthSigma = 0.0;             ///< meters
  double fogDensity = 0.0;             ///< per meter
  std::uint64_t seed = 1;
  CameraIntrinsics intrinsics = defaultIntrinsics();

  double advancePerFrame = 0.6;        ///< meters the vehicle moves between dataset frames
  double headingJitter = 0.017453292519943295;  ///< max |yaw| per dataset frame, radians (1 deg)

  /// 640x480, f = 525, principal point at the raster center.
  static CameraIntrinsics defaultIntrinsics();

  /// Throws ParameterError on an invalid scene.
  void validate() const;
};

/// Named scene variants used by the CLI and the acceptance suite.
SceneSpec cleanScene();
SceneSpec fogScene();       ///< fogDensity 0.08, intensity sigma 8, depth sigma 1 cm
SceneSpec obstacleScene();  ///< clean scene plus one 1.5 m box ahead
SceneSpec dashedScene();
SceneSpec sceneByName(const std::string& name);

/// Surface tones before fog and noise.
inline constexpr int kRoadTone = 90;
inline constexpr int kMarkerTone = 250;
inline constexpr int kObstacleTone = 140;
inline constexpr int kSkyTone = 30;
inline constexpr double kSensorRange = 60.0;

struct RenderedFrame {
  Frame frame;
  GroundTruth truth;
};

/// Ray casts every pixel against the road plane and the obstacles. Depth is the
/// z-distance of the nearest hit, invalid beyond the sensor range or for sky.
/// `noiseStream` selects the noise sequence so dataset frames differ.
RenderedFrame renderFrame(const SceneSpec& spec, double vehicleOffset, double headingJitter,
                          std::uint64_t noiseStream = 0);

/// Writes `frames` frames, ground truth, camera.txt and manifest.txt to `outDir`.
/// Returns the manifest text. Throws IoError if the directory cannot be written.
std::string makeDataset(const SceneSpec& spec, int frames, const std::filesystem::path& outDir);

/// Heading jitter and offset used for frame `index` of a dataset.
double datasetJitter(const SceneSpec& spec, int index);
double datasetOffset(const SceneSpec& spec, int index);

}  // namespace lanedet
