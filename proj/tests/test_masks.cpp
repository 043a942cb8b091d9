#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "oracles/mask_oracle.hpp"
#include "sonarnav/masks.hpp"
#include "sonarnav/scenario.hpp"

using namespace sonarnav;

using namespace oracle;

TEST_CASE("region_to_mask equals the brute-force oracle on the reduced grid") {
  const Grid g = Grid::reduced();
  std::mt19937_64 rng(2024);
  for (int kind = 0; kind < 6; ++kind) {
    for (int trial = 0; trial < 20; ++trial) {
      const ControlRegion region = random_region(kind, rng);
      const SensorPose pose = random_pose(rng);
      const TernaryMask m = region_to_mask(region, pose, g);
      std::size_t mismatches = 0;
      for (std::size_t i = 0; i < g.n_range; ++i)
        for (std::size_t j = 0; j < g.n_angle; ++j) {
          const Vec2 p = voxel_point(g.range_center(i), deg2rad(g.angle_deg(j)), pose.l(), pose.alpha(), pose.beta());
          const int expected = oracle_contains(region.shape(), p) ? (p.y >= 0 ? 1 : -1) : 0;
          mismatches += m.at(i, j) != expected;
        }
      CHECK_MESSAGE(mismatches == 0, region.kind());
    }
  }
}

TEST_CASE("half-circle CA masks match the oracle on the canonical grid for a three-sensor setup") {
  const Grid g = Grid::canonical();
  const ControlRegion ca{HalfCircle{0.3}};
  for (const auto& spec : standard_setup(1)) {
    const SensorPose pose = spec.pose();
    const TernaryMask m = region_to_mask(ca, pose, g);
    std::size_t expected_nonzero = 0, mismatches = 0;
    for (std::size_t i = 0; i < g.n_range; ++i)
      for (std::size_t j = 0; j < g.n_angle; ++j) {
        const Vec2 p = voxel_point(g.range_center(i), deg2rad(g.angle_deg(j)), pose.l(), pose.alpha(), pose.beta());
        const bool in = oracle_contains(ca.shape(), p);
        expected_nonzero += in;
        mismatches += (m.at(i, j) != 0) != in;
      }
    CHECK(mismatches == 0);
    CHECK(m.nonzero() == expected_nonzero);
  }
}

TEST_CASE("large circle around a centered sensor covers every voxel with the bearing sign") {
  const Grid g = Grid::reduced();
  const TernaryMask m = region_to_mask(ControlRegion{Circle{10.0}}, SensorPose{}, g);
  for (std::size_t i = 0; i < g.n_range; ++i)
    for (std::size_t j = 0; j < g.n_angle; ++j) {
      const double th = g.angle_deg(j);
      CHECK(m.at(i, j) == (th > 0 ? -1 : 1));
    }
}

TEST_CASE("region behind the platform gives an all-zero mask") {
  const TernaryMask m = region_to_mask(ControlRegion{Rectangle{-3.0, -0.5, -1.0, 1.0}}, SensorPose{}, Grid::canonical());
  CHECK(m.nonzero() == 0);
}

TEST_CASE("degenerate regions are rejected at construction") {
  CHECK_THROWS_AS(ControlRegion{Circle{0.0}}, std::invalid_argument);
  CHECK_THROWS_AS(ControlRegion{HalfCircle{-1.0}}, std::invalid_argument);
  CHECK_THROWS_AS(ControlRegion(Rectangle{1.0, 1.0, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ControlRegion{Corridor{NAN}}, std::invalid_argument);
  CHECK_THROWS_AS(ControlRegion(Trapezoid{{Vec2{0, 0}, Vec2{1, 0}, Vec2{2, 0}, Vec2{3, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(ControlRegion(Sector{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("ternarity and split_lr partition over random regions and poses") {
  const Grid g = Grid::reduced();
  std::mt19937_64 rng(99);
  for (int s = 0; s < 500; ++s) {
    const ControlRegion region = random_region(static_cast<int>(rng() % 6), rng);
    const TernaryMask m = region_to_mask(region, random_pose(rng), g);
    const auto [left, right] = split_lr(m);
    bool ok = true;
    for (std::size_t k = 0; k < m.values.size(); ++k) {
      const int v = m.values[k];
      ok = ok && (v == -1 || v == 0 || v == 1);
      ok = ok && left.values[k] + right.values[k] == std::abs(v);
      ok = ok && left.values[k] == (v > 0) && right.values[k] == (v < 0);
    }
    CHECK(ok);
  }
}

TEST_CASE("split_lr identities") {
  const Grid g = Grid::reduced();
  TernaryMask zero{g, std::vector<std::int8_t>(g.size(), 0)};
  auto [l0, r0] = split_lr(zero);
  CHECK(std::all_of(l0.values.begin(), l0.values.end(), [](auto v) { return v == 0; }));
  CHECK(std::all_of(r0.values.begin(), r0.values.end(), [](auto v) { return v == 0; }));
  TernaryMask ones{g, std::vector<std::int8_t>(g.size(), 1)};
  auto [l1, r1] = split_lr(ones);
  CHECK(std::all_of(l1.values.begin(), l1.values.end(), [](auto v) { return v == 1; }));
  CHECK(std::all_of(r1.values.begin(), r1.values.end(), [](auto v) { return v == 0; }));
}

TEST_CASE("mirroring region and pose flips the angle axis and negates signs") {
  const Grid g = Grid::reduced();
  std::mt19937_64 rng(31);
  for (int s = 0; s < 120; ++s) {
    const ControlRegion region = random_region(s % 6, rng);
    const SensorPose pose = random_pose(rng);
    const SensorPose mirror_pose(pose.l(), -pose.alpha(), -pose.beta());
    const TernaryMask a = region_to_mask(region, pose, g);
    const TernaryMask b = region_to_mask(region.mirrored(), mirror_pose, g);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < g.n_range; ++i)
      for (std::size_t j = 0; j < g.n_angle; ++j) {
        const Vec2 p = voxel_point(g.range_center(i), deg2rad(g.angle_deg(j)), pose.l(), pose.alpha(), pose.beta());
        if (std::abs(p.y) < 1e-9) continue;
        mismatches += a.at(i, j) != -b.at(i, g.n_angle - 1 - j);
      }
    CHECK_MESSAGE(mismatches == 0, region.kind());
  }
}

TEST_CASE("flowline mask for a line one metre to the left of a centered sensor") {
  const Grid g = Grid::canonical();
  const FlowLineMask f = flowline_mask(1.0, SensorPose{}, g);
  REQUIRE(f.length() > 0);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& v : f.voxels) {
    const double th = deg2rad(g.angle_deg(v.angle_idx));
    CHECK(th < 0.0);
    const double r = 1.0 / std::abs(std::sin(th));
    CHECK(v.range_idx == static_cast<std::size_t>(std::floor(r / g.range_bin)));
    CHECK(seen.insert({v.range_idx, v.angle_idx}).second);
  }
  CHECK(flowline_mask(0.0, SensorPose{}, g).length() == 0);
  CHECK_THROWS_AS(flowline_mask(6.0, SensorPose{}, g), std::invalid_argument);
}

TEST_CASE("flowline voxels reproject onto the line") {
  const Grid g = Grid::canonical();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ud(-2.5, 2.5);
  for (int s = 0; s < 100; ++s) {
    const SensorPose pose = random_pose(rng);
    const double d = ud(rng);
    const FlowLineMask f = flowline_mask(d, pose, g);
    for (const auto& v : f.voxels) {
      const double th = deg2rad(g.angle_deg(v.angle_idx));
      const Vec2 p = voxel_point(g.range_center(v.range_idx), th, pose.l(), pose.alpha(), pose.beta());
      CHECK(std::abs(p.y - d) < g.range_bin * std::max(1.0, 1.0 / std::abs(std::cos(th))));
    }
  }
}

TEST_CASE("points carried by forward flow stay on their flowline voxels") {
  const Grid g = Grid::canonical();
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ud(0.3, 2.0), us(0.0, 1.0);
  int checked = 0;
  for (int s = 0; s < 40; ++s) {
    const SensorPose pose(0.15 * us(rng), -kPi / 2 + kPi * us(rng), deg2rad(-30.0 + 60.0 * us(rng)));
    const double d = (s % 2 ? 1.0 : -1.0) * ud(rng);
    const FlowLineMask f = flowline_mask(d, pose, g);
    std::vector<long> bin_of_column(g.n_angle, -1);
    for (const auto& v : f.voxels) bin_of_column[v.angle_idx] = static_cast<long>(v.range_idx);

    const PolarPoint start = platform_to_sensor({4.0, d}, pose);
    if (start.r > g.r_max() || std::abs(start.theta) > kPi / 2) continue;
    const FlowLine line = integrate_flow_line(start, pose, {0.3, 0.0}, 0.01, 4000);
    for (std::size_t k = 1; k < line.points.size(); ++k) {
      const PolarPoint a = line.points[k - 1], b = line.points[k];
      for (std::size_t j = 0; j < g.n_angle; ++j) {
        const double c = deg2rad(g.angle_deg(j));
        if ((a.theta - c) * (b.theta - c) > 0.0 || a.theta == b.theta) continue;
        const double r = a.r + (b.r - a.r) * (c - a.theta) / (b.theta - a.theta);
        if (r >= g.r_max()) continue;
        REQUIRE(bin_of_column[j] >= 0);
        CHECK(std::abs(static_cast<long>(std::floor(r / g.range_bin)) - bin_of_column[j]) <= 1);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("mask PGM layout") {
  const Grid g = Grid::reduced();
  TernaryMask m{g, std::vector<std::int8_t>(g.size(), 0)};
  m.values[0] = -1;
  m.values[1] = 1;
  std::ostringstream os;
  write_mask_pgm(os, m);
  const std::string s = os.str();
  const std::string header = "P5\n37 50\n255\n";
  REQUIRE(s.size() == header.size() + g.size());
  CHECK(s.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(s[header.size()]) == 0);
  CHECK(static_cast<unsigned char>(s[header.size() + 1]) == 255);
  CHECK(static_cast<unsigned char>(s[header.size() + 2]) == 128);
}
