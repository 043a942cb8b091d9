#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sonarnav/geometry.hpp"

namespace sonarnav {

struct WallSegment {
  Vec2 a;
  Vec2 b;
  double reflectivity{1.0};
};

struct CircleObstacle {
  Vec2 center;
  double radius{0.1};
  double reflectivity{1.0};
};

/// Circle moving along a closed piecewise-linear path at constant speed.
struct DynamicObstacle {
  double radius{0.2};
  double speed{0.0};  // m/s
  std::vector<Vec2> path;
  double reflectivity{1.0};

  // Progress along the loop: current leg and distance travelled on it.
  std::size_t leg{0};
  double along{0.0};

  Vec2 position() const;
  /// Moves `distance` metres along the path, wrapping from the last vertex to the first.
  void advance(double distance);
};

struct EnvironmentModel {
  std::vector<WallSegment> segments;
  std::vector<CircleObstacle> circles;
  std::vector<DynamicObstacle> dynamic;

  /// Static circles followed by dynamic obstacles at their current positions.
  std::vector<CircleObstacle> circle_snapshot() const;
  void advance(double dt);

  struct Bounds {
    Vec2 min;
    Vec2 max;
  };
  Bounds bounds() const;
};

}  // namespace sonarnav
