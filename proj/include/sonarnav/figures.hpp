#pragma once

// Plain raster figures (PPM/PGM) for flow-lines, trajectories and maps.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sonarnav/energyscape.hpp"
#include "sonarnav/flow_model.hpp"
#include "sonarnav/sim.hpp"
#include "sonarnav/world.hpp"

namespace sonarnav {

using Rgb = std::array<std::uint8_t, 3>;

struct Image {
  std::size_t width{0}, height{0};
  std::vector<Rgb> pixels;

  Image(std::size_t w, std::size_t h, Rgb fill = {255, 255, 255}) : width(w), height(h), pixels(w * h, fill) {}
  void set(long x, long y, Rgb c);
  void line(long x0, long y0, long x1, long y1, Rgb c);
  void disc(long cx, long cy, long r, Rgb c);
};

void write_ppm(std::ostream& out, const Image& img);

Rgb layer_color(Layer layer);

/// Flow-lines drawn in the sensor image (bearing across, range down), one
/// column per grid bearing and `px_per_m` rows per metre.
Image plot_flow_lines(const SensorPose& pose, PlatformMotion motion, std::span<const PolarPoint> starts,
                      const Grid& grid = Grid::canonical(), double duration = 5.0, double dt = 0.01,
                      double px_per_m = 100.0);

/// Grayscale energyscape image (bearing across, range down), scaled to its maximum.
Image plot_energyscape(const Energyscape& e);

/// Top-down world map with trajectories coloured by the active layer.
Image plot_trajectories(const EnvironmentModel& world, std::span<const std::vector<TrajectorySample>> runs,
                        double px_per_m = 50.0, double margin = 0.5);

}  // namespace sonarnav
