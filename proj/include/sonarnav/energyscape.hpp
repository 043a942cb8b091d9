#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace sonarnav {

/// Polar image grid shared by energyscapes and masks. Bin i covers ranges
/// [i, i+1) * range_bin; column j sits at bearing angle_min_deg + j * angle_step_deg.
struct Grid {
  std::size_t n_range{500};
  std::size_t n_angle{181};
  double range_bin{0.01};       // m
  double angle_min_deg{-90.0};
  double angle_step_deg{1.0};

  double r_max() const { return static_cast<double>(n_range) * range_bin; }
  double range_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * range_bin; }
  double angle_deg(std::size_t j) const { return angle_min_deg + static_cast<double>(j) * angle_step_deg; }
  double angle_rad(std::size_t j) const;
  std::size_t size() const { return n_range * n_angle; }
  std::size_t index(std::size_t range_idx, std::size_t angle_idx) const { return range_idx * n_angle + angle_idx; }

  /// 500 x 181 grid: 1 cm bins to 5 m, 1 degree steps over +-90 degrees.
  static Grid canonical() { return {}; }
  /// 50 x 37 grid (10 cm, 5 degrees) used for exhaustive oracle checks.
  static Grid reduced() { return {50, 37, 0.1, -90.0, 5.0}; }

  bool operator==(const Grid&) const = default;
};

/// Per-sensor polar image of reflection energy, stored range-major.
struct Energyscape {
  Grid grid;
  std::vector<float> energy;
  int sensor_index{0};
  double timestamp{0.0};

  Energyscape() = default;
  Energyscape(const Grid& g, int sensor, double t)
      : grid(g), energy(g.size(), 0.0f), sensor_index(sensor), timestamp(t) {}

  float at(std::size_t range_idx, std::size_t angle_idx) const { return energy[grid.index(range_idx, angle_idx)]; }
  float& at(std::size_t range_idx, std::size_t angle_idx) { return energy[grid.index(range_idx, angle_idx)]; }

  struct Peak {
    std::size_t range_idx{0};
    std::size_t angle_idx{0};
    float value{0.0f};
  };
  /// Global maximum; first occurrence in storage order on ties.
  Peak argmax() const;
};

// Binary dump: little-endian {u32 n_range, u32 n_angle, f64 r_max, f64 timestamp}
// followed by n_range * n_angle float32 energies, range-major.
void write_energyscape(std::ostream& out, const Energyscape& e);
void write_energyscape(const std::filesystem::path& path, const Energyscape& e);
/// The returned grid assumes the canonical +-90 degree span.
Energyscape read_energyscape(std::istream& in);
Energyscape read_energyscape(const std::filesystem::path& path);

/// Debug CSV: header "range_m,<angle columns>" then one row per range bin.
void write_energyscape_csv(std::ostream& out, const Energyscape& e);

}  // namespace sonarnav
