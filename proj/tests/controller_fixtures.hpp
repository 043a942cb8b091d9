#pragma once

// Scripted controller inputs shared by the unit and acceptance suites.

#include <cmath>
#include <vector>

#include "sonarnav/controller.hpp"

namespace fixtures {

using namespace sonarnav;

/// Centered forward sensor with a CA half-circle, a frontal OA trapezoid and a wide RCF corridor.
inline LayerRegions standard_regions() {
  LayerRegions r;
  r.ca.push_back(ControlRegion{HalfCircle{0.3}});
  r.oa.push_back(ControlRegion{Trapezoid{{Vec2{0.0, -0.4}, Vec2{5.0, -0.4}, Vec2{5.0, 0.4}, Vec2{0.0, 0.4}}}});
  r.rcf.push_back(ControlRegion{Corridor{1.5}});
  return r;
}

inline ControllerMasks standard_masks(const ControllerConfig& cfg, const Grid& grid = Grid::canonical()) {
  const std::vector<SensorPose> sensors{SensorPose{}};
  return ControllerMasks::build(standard_regions(), sensors, grid, cfg.d_grid);
}

/// Voxel nearest to (r, bearing_deg) on the grid.
inline std::pair<std::size_t, std::size_t> voxel_at(const Grid& g, double r, double bearing_deg) {
  const auto i = static_cast<std::size_t>(std::floor(r / g.range_bin));
  const auto j = static_cast<std::size_t>(std::lround((bearing_deg - g.angle_min_deg) / g.angle_step_deg));
  return {i, j};
}

inline void put(Energyscape& e, double r, double bearing_deg, float value) {
  const auto [i, j] = voxel_at(e.grid, r, bearing_deg);
  e.at(i, j) = value;
}

/// Unit-free wall: `value` on every voxel of the flow-line y = d.
inline void paint_wall(Energyscape& e, double d, float value, const SensorPose& pose = {}) {
  for (const auto& v : flowline_mask(d, pose, e.grid).voxels) e.at(v.range_idx, v.angle_idx) = value;
}

/// Reflects an energyscape across the boresight (column j <-> n-1-j).
inline Energyscape mirrored(const Energyscape& e) {
  Energyscape m(e.grid, e.sensor_index, e.timestamp);
  for (std::size_t i = 0; i < e.grid.n_range; ++i)
    for (std::size_t j = 0; j < e.grid.n_angle; ++j) m.at(i, e.grid.n_angle - 1 - j) = e.at(i, j);
  return m;
}

/// Profile over cfg.d_grid with the given (d, value) bumps and zeros elsewhere.
inline AlignmentProfile profile_with(const std::vector<double>& d_grid, std::vector<std::pair<double, double>> bumps) {
  AlignmentProfile p;
  p.d = d_grid;
  p.A.assign(d_grid.size(), 0.0);
  p.observable.assign(d_grid.size(), true);
  for (auto [d, v] : bumps)
    for (std::size_t k = 0; k < d_grid.size(); ++k)
      if (std::abs(d_grid[k] - d) < 1e-9) p.A[k] = v;
  return p;
}

}  // namespace fixtures
