#include <doctest.h>

#include <random>

#include "lanedet/error.hpp"
#include "lanedet/respond.hpp"
#include "test_support.hpp"

using namespace lanedet;

namespace {

NormalMap normals(int w, int h) {
  return {Raster<Eigen::Vector3d>(w, h, Eigen::Vector3d::Zero()), Mask(w, h, 0)};
}

}  // namespace

TEST_SUITE("geometric map") {
  TEST_CASE("normal along the vertical axis at the depth limit") {
    NormalMap n = normals(4, 4);
    n.normals(1, 2) = {0, 1, 0};
    n.validity(1, 2) = 1;
    DepthImage d(4, 4);
    d.set(1, 2, 20.0);
    CHECK(geomMap(n, d, Config{})(1, 2) == doctest::Approx(0.5));

    n.normals(1, 2) = {0, -1, 0};
    CHECK(geomMap(n, d, Config{})(1, 2) == doctest::Approx(0.5));
  }

  TEST_CASE("invalid depth and normal on the last row") {
    const int h = 480;
    NormalMap n = normals(3, h);
    DepthImage d(3, h);
    const FloatMap g = geomMap(n, d, Config{});
    CHECK(g(0, h - 1) == doctest::Approx(0.1 * (h - 1) / h));
    CHECK(g(2, 0) == 0.0);
  }

  TEST_CASE("orthogonal normal at half the depth limit") {
    NormalMap n = normals(2, 2);
    n.normals(0, 0) = {1, 0, 0};
    n.validity(0, 0) = 1;
    DepthImage d(2, 2);
    d.set(0, 0, 10.0);
    CHECK(geomMap(n, d, Config{})(0, 0) == doctest::Approx(0.05));
  }

  TEST_CASE("depth beyond the limit falls back to the row term") {
    NormalMap n = normals(2, 10);
    DepthImage d(2, 10);
    d.set(0, 5, 35.0);
    CHECK(geomMap(n, d, Config{})(0, 5) == doctest::Approx(0.1 * 5 / 10));
  }

  TEST_CASE("values stay within [0, alpha + beta]") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-1, 1), z(-5, 40);
    const int w = 50, h = 40;
    NormalMap n = normals(w, h);
    DepthImage d(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        n.normals(x, y) = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized();
        n.validity(x, y) = (x + y) % 3 != 0;
        d.set(x, y, z(rng));
      }
    Config cfg;
    cfg.alpha = 0.6;
    cfg.beta = 0.3;
    for (double v : geomMap(n, d, cfg).pixels()) {
      CHECK(v >= 0.0);
      CHECK(v <= cfg.alpha + cfg.beta + 1e-12);
    }
  }

  TEST_CASE("size mismatch") { CHECK_THROWS_AS(geomMap(normals(3, 3), DepthImage(4, 3), Config{}), InputError); }
}

TEST_SUITE("fusion") {
  TEST_CASE("threshold examples") {
    FloatMap m(3, 1), g(3, 1, 0.5);
    m(0, 0) = 0.3;
    m(1, 0) = 0.6;
    m(2, 0) = 0.5;
    const FloatMap r = fuse(m, g, 0.5);
    CHECK(r(0, 0) == 0.3);
    CHECK(r(1, 0) == doctest::Approx(1.1));
    CHECK(r(2, 0) == doctest::Approx(1.0));
  }

  TEST_CASE("zero geometry passes the match through") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(0, 1);
    FloatMap m(30, 20);
    for (auto& v : m.pixels()) v = u(rng);
    CHECK(fuse(m, FloatMap(30, 20, 0.0), 0.5) == m);
  }

  TEST_CASE("below-threshold pixels are bit-exact and the map is monotone in M") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0, 1), ug(0, 0.5);
    FloatMap m(40, 30), g(40, 30);
    for (auto& v : m.pixels()) v = u(rng);
    for (auto& v : g.pixels()) v = ug(rng);
    const double tau = 0.5;
    const FloatMap r = fuse(m, g, tau);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.pixels()[i] < tau) CHECK(r.pixels()[i] == m.pixels()[i]);
      else CHECK(r.pixels()[i] == m.pixels()[i] + g.pixels()[i]);
    }

    FloatMap larger = m;
    for (auto& v : larger.pixels()) v = std::min(1.0, v + u(rng) * 0.2);
    const FloatMap r2 = fuse(larger, g, tau);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(r2.pixels()[i] >= r.pixels()[i]);
  }

  TEST_CASE("both sides share the geometric map") {
    FloatMap l(2, 1, 0.7), r(2, 1, 0.2), g(2, 1, 0.25);
    RespondMaps maps = respondMaps(l, r, g, 0.5);
    CHECK(maps.left(0, 0) == doctest::Approx(0.95));
    CHECK(maps.right(0, 0) == 0.2);
    CHECK(maps.g == g);
  }

  TEST_CASE("size mismatch") { CHECK_THROWS_AS(fuse(FloatMap(2, 2), FloatMap(2, 3), 0.5), InputError); }
}
