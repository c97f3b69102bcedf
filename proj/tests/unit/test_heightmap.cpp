#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "depthsim/bvh.hpp"
#include "depthsim/error.hpp"
#include "depthsim/heightmap.hpp"
#include "depthsim/terrain.hpp"
#include "support.hpp"

using namespace depthsim;

TEST_CASE("grid geometry") {
  const HeightmapLayout layout;
  CHECK(layout.rows == 20);
  CHECK(layout.cols == 20);
  CHECK(layout.rows * layout.cell == doctest::Approx(1.0));
  const BasePose base{Vec3(0, 0, 0), 0.0};
  CHECK((heightmap_cell_center(layout, base, 0, 0) - Vec3(0.025, -0.475, 0)).norm() < 1e-15);
  CHECK((heightmap_cell_center(layout, base, 19, 19) - Vec3(0.975, 0.475, 0)).norm() < 1e-12);
}

TEST_CASE("flat terrain gives a constant offset") {
  TerrainSpec s;
  const HeightmapGrid g = extract_heightmap(s, BasePose{Vec3(0.3, -0.2, 0.8), 0.4});
  REQUIRE(g.size() == 400);
  for (double v : g.values) CHECK(v == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("stairs rows read the step height") {
  TerrainSpec s;
  s.kind = TerrainKind::StairsUp;
  s.params.step_height = 0.1;
  s.params.step_run = 0.3;
  const HeightmapGrid g = extract_heightmap(s, BasePose{Vec3::Zero(), 0.0});
  for (int r = 0; r < 20; ++r) {
    const double d = (r + 0.5) * 0.05;
    for (int c = 0; c < 20; ++c) {
      CHECK(std::abs(g.at(r, c) - 0.1 * std::floor(d / 0.3)) < 1e-6);
    }
  }
}

TEST_CASE("extract_heightmap matches analytic height minus base z") {
  for (TerrainKind k : {TerrainKind::StairsDown, TerrainKind::Gap, TerrainKind::HighPlane,
                        TerrainKind::Discrete, TerrainKind::RoughSlopeUp}) {
    TerrainSpec s;
    s.kind = k;
    s.seed = 5;
    s.params.start = 0.3;
    const BasePose base{Vec3(0.013, 0.21, 0.87), 0.35};
    const HeightmapGrid g = extract_heightmap(s, base);
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 20; ++c) {
        const Vec3 p = heightmap_cell_center(g.layout, base, r, c);
        CHECK(std::abs(g.at(r, c) - (analytic_height(s, p.x(), p.y()) - 0.87)) < 1e-6);
      }
    }
  }
}

TEST_CASE("base height shifts every cell") {
  TerrainSpec s;
  s.kind = TerrainKind::Discrete;
  const Bvh b = Bvh::build(build_terrain(s));
  const HeightmapGrid lo = extract_heightmap(b, BasePose{Vec3(0.1, 0.1, 0.8), 0.2});
  const HeightmapGrid hi = extract_heightmap(b, BasePose{Vec3(0.1, 0.1, 1.05), 0.2});
  for (std::size_t i = 0; i < lo.size(); ++i) CHECK(hi.values[i] == doctest::Approx(lo.values[i] - 0.25));
}

TEST_CASE("yaw matches a rotated terrain") {
  TerrainSpec s;
  s.kind = TerrainKind::Discrete;
  s.seed = 3;
  const TriangleMesh mesh = build_terrain(s);
  // Rotating the terrain by -90 degrees turns a robot facing +y into one facing +x.
  TriangleMesh rotated = mesh;
  for (Vec3& v : rotated.vertices) v = Vec3(v.y(), -v.x(), v.z());
  const HeightmapGrid turned = extract_heightmap(Bvh::build(mesh), BasePose{Vec3(0.01, 0.02, 0.9), std::numbers::pi / 2});
  const HeightmapGrid straight = extract_heightmap(Bvh::build(rotated), BasePose{Vec3(0.02, -0.01, 0.9), 0.0});
  for (std::size_t i = 0; i < turned.size(); ++i) CHECK(std::abs(turned.values[i] - straight.values[i]) < 1e-6);
}

TEST_CASE("translating terrain and base together changes nothing") {
  TerrainSpec s;
  s.kind = TerrainKind::Gap;
  s.params.start = 0.4;
  const TriangleMesh mesh = build_terrain(s);
  TriangleMesh moved = mesh;
  for (Vec3& v : moved.vertices) v += Vec3(0.37, -0.61, 0.0);
  const BasePose base{Vec3(0.11, 0.02, 0.9), 0.1};
  const BasePose base2{base.position + Vec3(0.37, -0.61, 0.0), 0.1};
  const HeightmapGrid a = extract_heightmap(Bvh::build(mesh), base);
  const HeightmapGrid b = extract_heightmap(Bvh::build(moved), base2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-6);
}

TEST_CASE("no terrain beneath a cell") {
  TerrainSpec s;
  s.extent = 2.0;
  s.border = 1.0;
  try {
    extract_heightmap(s, BasePose{Vec3(0.5, 0, 0.9), 0.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
}

TEST_CASE("mae") {
  std::mt19937_64 rng(1);
  const HeightmapGrid a = testing::random_grid(rng), b = testing::random_grid(rng);
  CHECK(mae_cm(a, a) == 0.0);
  CHECK(mae_cm(a, b) == mae_cm(b, a));
  CHECK(mae_cm(a, b) > 0.0);
  HeightmapGrid shifted = a;
  for (double& v : shifted.values) v += 0.05;
  CHECK(std::abs(mae_cm(shifted, a) - 5.0) < 1e-12);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a.values[i] - b.values[i]);
  CHECK(std::abs(mae_cm(a, b) - 100.0 * sum / 400.0) < 1e-12);

  HeightmapGrid small = a;
  small.layout.rows = 10;
  small.values.resize(200);
  CHECK_THROWS_AS(mae_cm(small, a), Error);
}

TEST_CASE("recon_loss") {
  std::mt19937_64 rng(2);
  const HeightmapGrid gt = testing::random_grid(rng);
  const ReconLoss zero = recon_loss(gt, gt, gt);
  CHECK(zero.mse == 0.0);
  CHECK(zero.l1 == 0.0);
  CHECK(zero.total == 0.0);

  HeightmapGrid rough = gt;
  for (double& v : rough.values) v += 0.1;
  const ReconLoss l = recon_loss(rough, gt, gt);
  CHECK(std::abs(l.mse - 0.01) < 1e-12);
  CHECK(l.l1 == 0.0);
  CHECK(std::abs(l.total - 0.01) < 1e-12);
}
