#pragma once

// Brute-force region membership and random region/pose generators for the
// mask equivalence checks.

#include <cmath>
#include <random>

#include "sonarnav/masks.hpp"

namespace oracle {

using namespace sonarnav;


// Platform-frame position of a voxel center, written out independently of the library transform.
inline Vec2 voxel_point(double r, double th, double l, double alpha, double beta) {
  const double a = th + alpha + beta;
  return {l * std::cos(alpha) + r * std::cos(a), -l * std::sin(alpha) - r * std::sin(a)};
}

inline bool oracle_contains(const ControlRegion::Shape& shape, Vec2 p) {
  if (auto* s = std::get_if<HalfCircle>(&shape)) return p.x >= 0 && std::hypot(p.x, p.y) <= s->radius;
  if (auto* s = std::get_if<Circle>(&shape)) return std::hypot(p.x, p.y) <= s->radius;
  if (auto* s = std::get_if<Rectangle>(&shape))
    return s->x_min <= p.x && p.x <= s->x_max && s->y_min <= p.y && p.y <= s->y_max;
  if (auto* s = std::get_if<Corridor>(&shape)) return -s->half_width <= p.y && p.y <= s->half_width;
  if (auto* s = std::get_if<Trapezoid>(&shape)) {
    int pos = 0, neg = 0;
    for (int i = 0; i < 4; ++i) {
      const Vec2 a = s->vertices[i], b = s->vertices[(i + 1) % 4];
      const double c = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      pos += c > 0;
      neg += c < 0;
    }
    return pos == 0 || neg == 0;
  }
  const auto& s = std::get<Sector>(shape);
  if (std::hypot(p.x, p.y) > s.radius) return false;
  double diff = std::atan2(p.y, p.x) - s.heading;
  while (diff > kPi) diff -= 2 * kPi;
  while (diff <= -kPi) diff += 2 * kPi;
  return std::abs(diff) <= s.span / 2;
}

inline ControlRegion random_region(int kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind) {
    case 0:
      return ControlRegion{HalfCircle{0.2 + 2.5 * u(rng)}};
    case 1:
      return ControlRegion{Circle{0.2 + 2.5 * u(rng)}};
    case 2: {
      const double x0 = -1.0 + 2.0 * u(rng), y0 = -1.5 + 2.0 * u(rng);
      return ControlRegion{Rectangle{x0, x0 + 0.2 + 2.0 * u(rng), y0, y0 + 0.2 + 1.5 * u(rng)}};
    }
    case 3:
      return ControlRegion{Corridor{0.1 + 1.5 * u(rng)}};
    case 4: {
      const double x0 = -0.5 + u(rng), x1 = x0 + 0.3 + 2.0 * u(rng);
      const double w0 = 0.1 + u(rng), w1 = 0.1 + u(rng), dy = -0.5 + u(rng);
      return ControlRegion{Trapezoid{{Vec2{x0, dy - w0}, Vec2{x1, dy - w1}, Vec2{x1, dy + w1}, Vec2{x0, dy + w0}}}};
    }
    default:
      return ControlRegion{Sector{0.2 + 3.0 * u(rng), 0.3 + 3.0 * u(rng), -kPi + 2 * kPi * u(rng)}};
  }
}

inline SensorPose random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return SensorPose(0.2 * u(rng), -kPi + 2 * kPi * u(rng), -kPi / 2 + kPi * u(rng));
}


/// Mismatching voxels between region_to_mask and the brute-force oracle.
inline std::size_t mask_mismatches(const ControlRegion& region, const SensorPose& pose, const Grid& g) {
  const TernaryMask m = region_to_mask(region, pose, g);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < g.n_range; ++i)
    for (std::size_t j = 0; j < g.n_angle; ++j) {
      const Vec2 p = voxel_point(g.range_center(i), deg2rad(g.angle_deg(j)), pose.l(), pose.alpha(), pose.beta());
      const int expected = oracle_contains(region.shape(), p) ? (p.y >= 0 ? 1 : -1) : 0;
      mismatches += m.at(i, j) != expected;
    }
  return mismatches;
}

}  // namespace oracle
