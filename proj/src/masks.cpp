#include "sonarnav/masks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace sonarnav {

namespace {

bool finite(double v) { return std::isfinite(v); }

double signed_area(const std::array<Vec2, 4>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < 4; ++i) a += cross(v[i], v[(i + 1) % 4]);
  return 0.5 * a;
}

void validate(const ControlRegion::Shape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfCircle> || std::is_same_v<T, Circle>) {
          if (!finite(s.radius) || s.radius <= 0.0) throw std::invalid_argument("region: radius must be > 0");
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          if (!finite(s.x_min) || !finite(s.x_max) || !finite(s.y_min) || !finite(s.y_max) || s.x_max <= s.x_min ||
              s.y_max <= s.y_min)
            throw std::invalid_argument("region: rectangle needs x_min < x_max and y_min < y_max");
        } else if constexpr (std::is_same_v<T, Corridor>) {
          if (!finite(s.half_width) || s.half_width <= 0.0)
            throw std::invalid_argument("region: corridor half width must be > 0");
        } else if constexpr (std::is_same_v<T, Trapezoid>) {
          for (const auto& p : s.vertices)
            if (!finite(p.x) || !finite(p.y)) throw std::invalid_argument("region: non-finite vertex");
          if (std::abs(signed_area(s.vertices)) <= 1e-12) throw std::invalid_argument("region: trapezoid has no area");
          // Convexity: all edge turns share one sign.
          int sign = 0;
          for (std::size_t i = 0; i < 4; ++i) {
            const double c = cross(s.vertices[(i + 1) % 4] - s.vertices[i], s.vertices[(i + 2) % 4] - s.vertices[(i + 1) % 4]);
            const int sc = c > 0.0 ? 1 : (c < 0.0 ? -1 : 0);
            if (sc != 0 && sign != 0 && sc != sign) throw std::invalid_argument("region: trapezoid must be convex");
            if (sc != 0) sign = sc;
          }
        } else if constexpr (std::is_same_v<T, Sector>) {
          if (!finite(s.span) || s.span <= 0.0 || s.span > 2.0 * kPi)
            throw std::invalid_argument("region: sector span must be in (0, 2 pi]");
          if (!finite(s.radius) || s.radius <= 0.0) throw std::invalid_argument("region: sector radius must be > 0");
          if (!finite(s.heading)) throw std::invalid_argument("region: non-finite sector heading");
        }
      },
      shape);
}

}  // namespace

ControlRegion::ControlRegion(Shape shape) : shape_(std::move(shape)) { validate(shape_); }

std::string ControlRegion::kind() const {
  static constexpr const char* names[] = {"half_circle", "circle", "rectangle", "corridor", "trapezoid", "sector"};
  return names[shape_.index()];
}

bool ControlRegion::contains(Vec2 p) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfCircle>) {
          return p.x >= 0.0 && dot(p, p) <= s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Circle>) {
          return dot(p, p) <= s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          return p.x >= s.x_min && p.x <= s.x_max && p.y >= s.y_min && p.y <= s.y_max;
        } else if constexpr (std::is_same_v<T, Corridor>) {
          return std::abs(p.y) <= s.half_width;
        } else if constexpr (std::is_same_v<T, Trapezoid>) {
          const double orient = signed_area(s.vertices) > 0.0 ? 1.0 : -1.0;
          for (std::size_t i = 0; i < 4; ++i)
            if (orient * cross(s.vertices[(i + 1) % 4] - s.vertices[i], p - s.vertices[i]) < 0.0) return false;
          return true;
        } else {
          if (dot(p, p) > s.radius * s.radius) return false;
          if (s.span >= 2.0 * kPi) return true;
          return std::abs(wrap_angle(std::atan2(p.y, p.x) - s.heading)) <= s.span / 2.0;
        }
      },
      shape_);
}

ControlRegion ControlRegion::mirrored() const {
  return std::visit(
      [](const auto& s) -> ControlRegion {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rectangle>) {
          return ControlRegion{Rectangle{s.x_min, s.x_max, -s.y_max, -s.y_min}};
        } else if constexpr (std::is_same_v<T, Trapezoid>) {
          Trapezoid t = s;
          for (auto& v : t.vertices) v.y = -v.y;
          return ControlRegion{t};
        } else if constexpr (std::is_same_v<T, Sector>) {
          return ControlRegion{Sector{s.span, s.radius, -s.heading}};
        } else {
          return ControlRegion{s};
        }
      },
      shape_);
}

std::size_t TernaryMask::nonzero() const {
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](std::int8_t v) { return v != 0; }));
}

TernaryMask region_to_mask(std::span<const ControlRegion> regions, const SensorPose& pose, const Grid& grid,
                           std::string layer, int sensor_index) {
  TernaryMask m{grid, std::vector<std::int8_t>(grid.size(), 0), std::move(layer), sensor_index};
  for (std::size_t j = 0; j < grid.n_angle; ++j) {
    const double th = grid.angle_rad(j);
    for (std::size_t i = 0; i < grid.n_range; ++i) {
      const Vec2 q = sensor_to_platform({grid.range_center(i), th}, pose);
      const bool inside = std::any_of(regions.begin(), regions.end(), [&](const ControlRegion& r) { return r.contains(q); });
      if (inside) m.values[grid.index(i, j)] = q.y >= 0.0 ? 1 : -1;
    }
  }
  return m;
}

TernaryMask region_to_mask(const ControlRegion& region, const SensorPose& pose, const Grid& grid, std::string layer,
                           int sensor_index) {
  return region_to_mask(std::span<const ControlRegion>(&region, 1), pose, grid, std::move(layer), sensor_index);
}

FlowLineMask flowline_mask(double d, const SensorPose& pose, const Grid& grid) {
  if (!std::isfinite(d) || std::abs(d) > grid.r_max() + pose.l())
    throw std::invalid_argument("flowline_mask: |d| must not exceed r_max + l");
  FlowLineMask f;
  f.d = d;
  const Vec2 origin = sensor_origin(pose);
  for (std::size_t j = 0; j < grid.n_angle; ++j) {
    const double a = grid.angle_rad(j) + pose.delta();
    const double uy = -std::sin(a);
    if (std::abs(uy) < 1e-12) continue;
    const double t = (d - origin.y) / uy;
    if (!(t > 0.0) || t >= grid.r_max()) continue;
    const auto i = static_cast<std::size_t>(std::floor(t / grid.range_bin));
    if (i < grid.n_range) f.voxels.push_back({i, j});
  }
  return f;
}

std::pair<BinaryMask, BinaryMask> split_lr(const TernaryMask& mask) {
  BinaryMask left{mask.grid, std::vector<std::uint8_t>(mask.values.size(), 0)};
  BinaryMask right{mask.grid, std::vector<std::uint8_t>(mask.values.size(), 0)};
  for (std::size_t k = 0; k < mask.values.size(); ++k) {
    left.values[k] = mask.values[k] > 0 ? 1 : 0;
    right.values[k] = mask.values[k] < 0 ? 1 : 0;
  }
  return {std::move(left), std::move(right)};
}

void write_mask_pgm(std::ostream& out, const TernaryMask& mask) {
  out << "P5\n" << mask.grid.n_angle << ' ' << mask.grid.n_range << "\n255\n";
  for (std::int8_t v : mask.values) {
    const unsigned char px = v < 0 ? 0 : (v > 0 ? 255 : 128);
    out.put(static_cast<char>(px));
  }
}

}  // namespace sonarnav
