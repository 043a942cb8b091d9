#include "sonarnav/figures.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace sonarnav {

void Image::set(long x, long y, Rgb c) {
  if (x < 0 || y < 0 || x >= static_cast<long>(width) || y >= static_cast<long>(height)) return;
  pixels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] = c;
}

void Image::line(long x0, long y0, long x1, long y1, Rgb c) {
  const long dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    set(x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void Image::disc(long cx, long cy, long r, Rgb c) {
  for (long y = -r; y <= r; ++y)
    for (long x = -r; x <= r; ++x)
      if (x * x + y * y <= r * r) set(cx + x, cy + y, c);
}

void write_ppm(std::ostream& out, const Image& img) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  for (const Rgb& p : img.pixels) out.write(reinterpret_cast<const char*>(p.data()), 3);
}

Rgb layer_color(Layer layer) {
  switch (layer) {
    case Layer::CA: return {220, 30, 30};
    case Layer::OA: return {240, 150, 20};
    case Layer::AFF: return {30, 140, 60};
    case Layer::RCF: return {40, 90, 220};
    case Layer::PASS: return {120, 120, 120};
  }
  return {0, 0, 0};
}

Image plot_flow_lines(const SensorPose& pose, PlatformMotion motion, std::span<const PolarPoint> starts,
                      const Grid& grid, double duration, double dt, double px_per_m) {
  const auto h = static_cast<std::size_t>(std::ceil(grid.r_max() * px_per_m));
  Image img(grid.n_angle, h);
  const double a0 = deg2rad(grid.angle_min_deg), step = deg2rad(grid.angle_step_deg);
  auto to_px = [&](PolarPoint p) {
    return std::pair<long, long>{std::lround((p.theta - a0) / step), std::lround(p.r * px_per_m)};
  };
  static constexpr Rgb palette[] = {{31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40}, {148, 103, 189}};
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const FlowLine fl =
        integrate_flow_line(starts[k], pose, motion, dt, static_cast<int>(std::lround(duration / dt)), grid.r_max());
    const Rgb c = palette[k % std::size(palette)];
    for (std::size_t i = 1; i < fl.points.size(); ++i) {
      const auto [x0, y0] = to_px(fl.points[i - 1]);
      const auto [x1, y1] = to_px(fl.points[i]);
      img.line(x0, y0, x1, y1, c);
    }
    const auto [sx, sy] = to_px(starts[k]);
    img.disc(sx, sy, 2, {0, 0, 0});
  }
  return img;
}

Image plot_energyscape(const Energyscape& e) {
  Image img(e.grid.n_angle, e.grid.n_range, {0, 0, 0});
  const float mx = e.energy.empty() ? 0.0f : *std::max_element(e.energy.begin(), e.energy.end());
  for (std::size_t i = 0; i < e.grid.n_range; ++i)
    for (std::size_t j = 0; j < e.grid.n_angle; ++j) {
      const auto v = mx > 0.0f ? static_cast<std::uint8_t>(std::lround(255.0 * e.at(i, j) / mx)) : 0;
      img.set(static_cast<long>(j), static_cast<long>(i), {v, v, v});
    }
  return img;
}

Image plot_trajectories(const EnvironmentModel& world, std::span<const std::vector<TrajectorySample>> runs,
                        double px_per_m, double margin) {
  auto b = world.bounds();
  for (const auto& run : runs)
    for (const auto& s : run) {
      b.min.x = std::min(b.min.x, s.pose.x);
      b.min.y = std::min(b.min.y, s.pose.y);
      b.max.x = std::max(b.max.x, s.pose.x);
      b.max.y = std::max(b.max.y, s.pose.y);
    }
  b.min = b.min - Vec2{margin, margin};
  b.max = b.max + Vec2{margin, margin};
  const auto w = static_cast<std::size_t>(std::ceil((b.max.x - b.min.x) * px_per_m)) + 1;
  const auto h = static_cast<std::size_t>(std::ceil((b.max.y - b.min.y) * px_per_m)) + 1;
  Image img(w, h);
  auto px = [&](Vec2 p) {
    return std::pair<long, long>{std::lround((p.x - b.min.x) * px_per_m), std::lround((b.max.y - p.y) * px_per_m)};
  };
  for (const auto& s : world.segments) {
    const auto [x0, y0] = px(s.a);
    const auto [x1, y1] = px(s.b);
    img.line(x0, y0, x1, y1, {0, 0, 0});
  }
  auto ring = [&](Vec2 c, double r, Rgb col) {
    const int n = 64;
    for (int k = 0; k < n; ++k) {
      const double a0 = 2.0 * kPi * k / n, a1 = 2.0 * kPi * (k + 1) / n;
      const auto [x0, y0] = px(c + Vec2{r * std::cos(a0), r * std::sin(a0)});
      const auto [x1, y1] = px(c + Vec2{r * std::cos(a1), r * std::sin(a1)});
      img.line(x0, y0, x1, y1, col);
    }
  };
  for (const auto& c : world.circles) ring(c.center, c.radius, {0, 0, 0});
  for (const auto& d : world.dynamic)
    for (std::size_t k = 0; k < d.path.size(); ++k) {
      const auto [x0, y0] = px(d.path[k]);
      const auto [x1, y1] = px(d.path[(k + 1) % d.path.size()]);
      img.line(x0, y0, x1, y1, {180, 180, 255});
    }
  for (const auto& run : runs)
    for (std::size_t k = 1; k < run.size(); ++k) {
      const auto [x0, y0] = px({run[k - 1].pose.x, run[k - 1].pose.y});
      const auto [x1, y1] = px({run[k].pose.x, run[k].pose.y});
      img.line(x0, y0, x1, y1, layer_color(run[k - 1].layer));
    }
  return img;
}

}  // namespace sonarnav
