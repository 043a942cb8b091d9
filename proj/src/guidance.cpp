#include "sonarnav/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sonarnav {

void WaypointPlan::validate() const {
  if (waypoints.empty()) throw std::invalid_argument("plan: at least one waypoint is required");
  for (const Vec2& w : waypoints)
    if (!std::isfinite(w.x) || !std::isfinite(w.y)) throw std::invalid_argument("plan: non-finite waypoint");
  if (!(capture_radius > 0.0)) throw std::invalid_argument("plan: capture_radius must be > 0");
  if (!(cruise_V >= 0.0)) throw std::invalid_argument("plan: cruise_V must be >= 0");
  if (!(omega_max > 0.0)) throw std::invalid_argument("plan: omega_max must be > 0");
}

GuidanceOutput input_command(const Pose2& robot, const WaypointPlan& plan, std::size_t active_index,
                             bool goal_reached) {
  GuidanceOutput out;
  out.active_index = active_index;
  out.goal_reached = goal_reached;
  if (plan.waypoints.empty() || goal_reached) return out;
  std::size_t i = std::min(active_index, plan.waypoints.size() - 1);
  const Vec2 p{robot.x, robot.y};
  while (norm(plan.waypoints[i] - p) <= plan.capture_radius) {
    if (i + 1 == plan.waypoints.size()) {
      out.active_index = i;
      out.goal_reached = true;
      return out;
    }
    ++i;
  }
  out.active_index = i;
  const Vec2 delta = plan.waypoints[i] - p;
  const double e = wrap_angle(std::atan2(delta.y, delta.x) - robot.yaw);
  out.cmd.omega = std::clamp(plan.k_heading * e, -plan.omega_max, plan.omega_max);
  out.cmd.V = plan.cruise_V * std::max(0.0, std::cos(e));
  return out;
}

}  // namespace sonarnav
