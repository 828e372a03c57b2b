#include <doctest.h>

#include <random>

#include "lanedet/error.hpp"
#include "lanedet/lanefit.hpp"
#include "test_support.hpp"

using namespace lanedet;
using namespace lanedet::testing;

namespace {

PointGrid gridFrom(const DepthImage& d, const CameraIntrinsics& cam) { return backproject(d, cam); }

const CameraIntrinsics kSmall{50, 50, 15.5, 15.5, 32, 32};

}  // namespace

TEST_SUITE("lookup") {
  TEST_CASE("valid cell returns its own point") {
    DepthImage d(32, 32);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) d.set(x, y, 2.0 + x * 0.01);
    PointGrid g = gridFrom(d, kSmall);
    CHECK(lookup3D(g, {10, 12}) == g.points(10, 12));
    CHECK(lookup3D(g, {10.3, 11.6}) == g.points(10, 12));
  }

  TEST_CASE("invalid cell falls back to its nearest valid neighbor") {
    DepthImage d(32, 32);
    d.set(11, 12, 3.0);
    d.set(13, 14, 4.0);
    PointGrid g = gridFrom(d, kSmall);
    CHECK(lookup3D(g, {10, 12}) == g.points(11, 12));
  }

  TEST_CASE("ties prefer the smaller row, then column") {
    DepthImage d(32, 32);
    d.set(11, 12, 3.0);
    d.set(9, 12, 3.5);
    d.set(10, 11, 4.0);
    PointGrid g = gridFrom(d, kSmall);
    CHECK(lookup3D(g, {10, 12}) == g.points(10, 11));
    d = DepthImage(32, 32);
    d.set(11, 12, 3.0);
    d.set(9, 12, 3.5);
    g = gridFrom(d, kSmall);
    CHECK(lookup3D(g, {10, 12}) == g.points(9, 12));
  }

  TEST_CASE("empty neighborhood is a depth gap") {
    DepthImage d(32, 32);
    d.set(14, 12, 3.0);  // four columns away: outside the 7x7 block
    PointGrid g = gridFrom(d, kSmall);
    CHECK_THROWS_AS(lookup3D(g, {10, 12}), DepthGapError);
    CHECK_NOTHROW(lookup3D(g, {11, 12}));
    CHECK_THROWS_AS(lookup3D(g, {-5, 12}), InputError);
  }
}

TEST_SUITE("plane") {
  TEST_CASE("unit axes") {
    LanePlane p = planeFromPoints({0, 0, 0}, {1, 0, 0}, {0, 0, 1});
    CHECK(p.normal.isApprox(Eigen::Vector3d(0, 1, 0)));
    CHECK(p.point == Eigen::Vector3d::Zero());
  }

  TEST_CASE("points from a pitched ground plane") {
    const double pitch = rad(10), h = 1.5;
    const Eigen::Vector3d n(0, std::cos(pitch), std::sin(pitch));
    const CameraIntrinsics cam{525, 525, 319.5, 239.5, 640, 480};
    DepthImage d = renderPlaneDepth(cam, n, h);
    PointGrid g = gridFrom(d, cam);
    LanePlane p = fitPlane(g, {200, 400}, {450, 400}, {380, 280});
    CHECK(angleBetweenDeg(p.normal, n) < 1.0);
    CHECK(p.normal.y() >= 0);
    CHECK(std::abs(n.dot(p.point) - h) < 1e-3);
  }

  TEST_CASE("collinear points") {
    CHECK_THROWS_AS(planeFromPoints({0, 0, 0}, {2, 0, 2}, {1, 0, 1}), DegeneratePlaneError);
    CHECK_THROWS_AS(planeFromPoints({1, 1, 1}, {1, 1, 1}, {0, 0, 3}), DegeneratePlaneError);
  }

  TEST_CASE("fit needs three distinct pixels") {
    DepthImage d(32, 32);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x) d.set(x, y, 2.0);
    PointGrid g = gridFrom(d, kSmall);
    CHECK_THROWS_AS(fitPlane(g, {5, 5}, {5, 5}, {20, 20}), DegeneratePlaneError);
  }

  TEST_CASE("normal is orthogonal to both spanning vectors and unit length") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
      if ((b - a).cross(c - a).norm() < 1e-3) continue;
      LanePlane p = planeFromPoints(a, b, c);
      CHECK(std::abs(p.normal.norm() - 1.0) < 1e-12);
      CHECK(std::abs(p.normal.dot(b - a)) < 1e-9 * (b - a).norm() + 1e-12);
      CHECK(std::abs(p.normal.dot(c - a)) < 1e-9 * (c - a).norm() + 1e-12);
      CHECK(p.normal.y() >= 0);
      CHECK(std::abs(p.distance(c)) < 1e-9);
    }
  }

  TEST_CASE("scaling the points keeps the normal") {
    std::mt19937 rng(20);
    std::uniform_real_distribution<double> u(-5, 5), s(0.1, 10);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
      if ((b - a).cross(c - a).norm() < 1e-3) continue;
      const double k = s(rng);
      CHECK(planeFromPoints(a, b, c).normal.isApprox(planeFromPoints(k * a, k * b, k * c).normal, 1e-9));
    }
  }

  TEST_CASE("text form") {
    LanePlane p = planeFromPoints({0, 1.5, 5}, {1, 1.5, 5}, {0, 1.4, 9});
    LanePlane q = parsePlane(formatPlane(p));
    CHECK((q.normal - p.normal).norm() < 1e-8);
    CHECK((q.point - p.point).norm() < 1e-8);
    CHECK_THROWS_AS(parsePlane("1 2 3"), FormatError);
    CHECK_THROWS_AS(parsePlane("a b c d e f"), FormatError);
  }

  TEST_CASE("angle between normals ignores orientation") {
    CHECK(normalAngleDeg({0, 1, 0}, {0, -1, 0}) == doctest::Approx(0.0));
    CHECK(normalAngleDeg({0, 1, 0}, {1, 0, 0}) == doctest::Approx(90.0));
    CHECK(normalAngleDeg({0, 1, 0}, {0, 1, 1}) == doctest::Approx(45.0));
  }
}
