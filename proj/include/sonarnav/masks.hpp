#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sonarnav/energyscape.hpp"
#include "sonarnav/flow_model.hpp"

namespace sonarnav {

// Control region primitives, all in the platform frame (x forward, y left).
struct HalfCircle {
  double radius;  // front half (x >= 0)
};
struct Circle {
  double radius;
};
struct Rectangle {
  double x_min, x_max, y_min, y_max;
};
/// Strip between two lines parallel to the platform x-axis at y = +-half_width.
struct Corridor {
  double half_width;
};
/// Convex quadrilateral.
struct Trapezoid {
  std::array<Vec2, 4> vertices;
};
/// Circular sector of the given radius, `span` radians wide around `heading` (CCW from x).
struct Sector {
  double span;
  double radius;
  double heading{0.0};
};

class ControlRegion {
 public:
  using Shape = std::variant<HalfCircle, Circle, Rectangle, Corridor, Trapezoid, Sector>;

  /// Throws std::invalid_argument for degenerate or non-finite shapes.
  explicit ControlRegion(Shape shape);

  const Shape& shape() const { return shape_; }
  std::string kind() const;
  bool contains(Vec2 p) const;

  /// Reflection across the platform x-axis.
  ControlRegion mirrored() const;

 private:
  Shape shape_;
};

/// Per-voxel ternary gate: +1 left of the platform x-axis, -1 right, 0 outside.
struct TernaryMask {
  Grid grid;
  std::vector<std::int8_t> values;
  std::string layer;
  int sensor_index{0};

  std::int8_t at(std::size_t range_idx, std::size_t angle_idx) const { return values[grid.index(range_idx, angle_idx)]; }
  std::size_t nonzero() const;
};

/// Voxel centers inside the region (union of regions) map to +1/-1 by the sign
/// of their platform-frame y; y == 0 maps to +1.
TernaryMask region_to_mask(const ControlRegion& region, const SensorPose& pose, const Grid& grid,
                           std::string layer = {}, int sensor_index = 0);
TernaryMask region_to_mask(std::span<const ControlRegion> regions, const SensorPose& pose, const Grid& grid,
                           std::string layer = {}, int sensor_index = 0);

struct Voxel {
  std::size_t range_idx;
  std::size_t angle_idx;
  bool operator==(const Voxel&) const = default;
};

/// Voxels occupied by the platform-frame line y = d: one per bearing column the line crosses.
struct FlowLineMask {
  std::vector<Voxel> voxels;
  double d{0.0};
  std::size_t length() const { return voxels.size(); }
};

/// Throws std::invalid_argument when |d| > r_max + l.
FlowLineMask flowline_mask(double d, const SensorPose& pose, const Grid& grid);

struct BinaryMask {
  Grid grid;
  std::vector<std::uint8_t> values;
};

/// (left, right) = (max(mask, 0), max(-mask, 0)).
std::pair<BinaryMask, BinaryMask> split_lr(const TernaryMask& mask);

/// Binary PGM, one column per bearing and one row per range bin; -1/0/+1 map to 0/128/255.
void write_mask_pgm(std::ostream& out, const TernaryMask& mask);

}  // namespace sonarnav
