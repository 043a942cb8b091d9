#pragma once

#include <cstddef>
#include <vector>

#include "sonarnav/controller.hpp"
#include "sonarnav/geometry.hpp"

namespace sonarnav {

struct WaypointPlan {
  std::vector<Vec2> waypoints;  // world frame
  double capture_radius{0.3};   // m
  double cruise_V{0.3};         // m/s
  double k_heading{1.5};
  double omega_max{1.0};        // rad/s

  /// Throws std::invalid_argument.
  void validate() const;
};

struct GuidanceOutput {
  VelocityCommand cmd;
  std::size_t active_index{0};
  bool goal_reached{false};
};

/// Proportional heading follower. Captured waypoints advance the index; the
/// final capture stops the platform and latches goal_reached.
GuidanceOutput input_command(const Pose2& robot, const WaypointPlan& plan, std::size_t active_index,
                             bool goal_reached = false);

}  // namespace sonarnav
