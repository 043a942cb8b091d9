#pragma once

// Planar acoustic-flow model: how static reflectors move through a sonar
// image under platform ego-motion.
//
// Angle convention. Sensor bearings follow the sonar image convention where
// a point at range r and bearing theta sits at (r cos theta, -r sin theta) in
// the sensor frame, so positive bearings point to the sensor's right. Mounting
// angles (alpha, beta) use the same sense relative to the platform x-axis.
// Platform yaw rates are counter-clockwise (left turn) positive.

#include <vector>

#include "sonarnav/geometry.hpp"

namespace sonarnav {

/// Mounting of one sonar on the platform.
class SensorPose {
 public:
  SensorPose() = default;
  /// Throws std::invalid_argument for l < 0 or non-finite values.
  SensorPose(double l, double alpha, double beta);

  static SensorPose from_table(double l_cm, double alpha_deg, double beta_deg) {
    return {l_cm / 100.0, deg2rad(alpha_deg), deg2rad(beta_deg)};
  }

  double l() const { return l_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double delta() const { return delta_; }

  bool operator==(const SensorPose&) const = default;

 private:
  double l_{0.0};
  double alpha_{0.0};
  double beta_{0.0};
  double delta_{0.0};
};

struct PolarPoint {
  double r{0.0};      // m
  double theta{0.0};  // rad
};

struct CartesianPoint {
  double x{0.0};
  double y{0.0};
  double z{0.0};
};

/// Platform ego-motion, constant over one measurement interval.
struct PlatformMotion {
  double V{0.0};      // m/s along platform x
  double omega{0.0};  // rad/s, CCW positive
};

struct FlowRate {
  double dr_dt{0.0};
  double dtheta_dt{0.0};
};

/// Spherical sonar coordinates to Cartesian. Throws std::domain_error on
/// non-finite input or r <= 0.
CartesianPoint polar_to_cartesian(PolarPoint p, double phi);

/// Inverse of polar_to_cartesian for a known elevation phi.
PolarPoint cartesian_to_polar(CartesianPoint c, double phi);

/// Rate of change of a static reflector's (r, theta) in the sensor image.
/// Throws std::domain_error for r <= 0.
FlowRate velocity_field(PolarPoint p, const SensorPose& pose, PlatformMotion motion);

/// Quantity conserved along a flow-line under pure translation.
double linear_flow_constant(PolarPoint p, const SensorPose& pose);

/// velocity_field with V = 0.
FlowRate rotational_flow_rate(PolarPoint p, const SensorPose& pose, double omega);

enum class FlowLineEnd {
  completed,       // all requested steps taken
  left_range,      // r exceeded r_max
  left_fov,        // |theta| exceeded pi/2
  non_positive_r,  // step landed on r <= 0 (or became non-finite)
};

struct FlowLine {
  std::vector<PolarPoint> points;  // includes the start point
  FlowLineEnd end{FlowLineEnd::completed};
};

/// RK4 integration of velocity_field from `start`. The point that leaves the
/// valid domain is not included.
FlowLine integrate_flow_line(PolarPoint start, const SensorPose& pose, PlatformMotion motion,
                             double dt, int n_steps, double r_max = 5.0);

// Rigid transforms between a sensor image and the platform frame
// (x forward, y left).

/// Sensor center in the platform frame.
Vec2 sensor_origin(const SensorPose& pose);
/// Counter-clockwise platform-frame angle of the sensor boresight.
double sensor_heading(const SensorPose& pose);
Vec2 sensor_to_platform(PolarPoint p, const SensorPose& pose);
PolarPoint platform_to_sensor(Vec2 q, const SensorPose& pose);

}  // namespace sonarnav
