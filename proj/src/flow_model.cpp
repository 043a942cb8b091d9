#include "sonarnav/flow_model.hpp"

#include <stdexcept>

namespace sonarnav {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string("non-finite ") + what);
}

}  // namespace

SensorPose::SensorPose(double l, double alpha, double beta) {
  if (!std::isfinite(l) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw std::invalid_argument("SensorPose: non-finite parameter");
  if (l < 0.0) throw std::invalid_argument("SensorPose: l must be >= 0");
  l_ = l;
  alpha_ = wrap_angle(alpha);
  beta_ = wrap_angle(beta);
  delta_ = wrap_angle(alpha_ + beta_);
}

CartesianPoint polar_to_cartesian(PolarPoint p, double phi) {
  require_finite(p.r, "range");
  require_finite(p.theta, "bearing");
  require_finite(phi, "elevation");
  if (p.r <= 0.0) throw std::domain_error("polar_to_cartesian: r must be > 0");
  const double st = std::sin(p.theta);
  return {p.r * std::cos(p.theta), -p.r * st * std::sin(phi), p.r * st * std::cos(phi)};
}

PolarPoint cartesian_to_polar(CartesianPoint c, double phi) {
  const double r = std::sqrt(c.x * c.x + c.y * c.y + c.z * c.z);
  // -y sin(phi) + z cos(phi) recovers r sin(theta) for the given elevation.
  const double s = -c.y * std::sin(phi) + c.z * std::cos(phi);
  return {r, std::atan2(s, c.x)};
}

FlowRate velocity_field(PolarPoint p, const SensorPose& pose, PlatformMotion motion) {
  require_finite(p.theta, "bearing");
  require_finite(motion.V, "V");
  require_finite(motion.omega, "omega");
  if (!(p.r > 0.0)) throw std::domain_error("velocity_field: r must be > 0");
  const double l_omega = pose.l() * motion.omega;
  const double a = pose.beta() - p.theta;
  const double b = p.theta + pose.delta();
  FlowRate f;
  f.dr_dt = -l_omega * std::sin(a) - motion.V * std::cos(b);
  f.dtheta_dt = (l_omega * std::cos(a) + motion.V * std::sin(b)) / p.r + motion.omega;
  return f;
}

double linear_flow_constant(PolarPoint p, const SensorPose& pose) {
  require_finite(p.r, "range");
  require_finite(p.theta, "bearing");
  return std::abs(p.r) * std::sin(p.theta + pose.delta());
}

FlowRate rotational_flow_rate(PolarPoint p, const SensorPose& pose, double omega) {
  return velocity_field(p, pose, {0.0, omega});
}

FlowLine integrate_flow_line(PolarPoint start, const SensorPose& pose, PlatformMotion motion,
                             double dt, int n_steps, double r_max) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_flow_line: dt must be > 0");
  if (!(start.r > 0.0) || start.r > r_max)
    throw std::domain_error("integrate_flow_line: start range outside (0, r_max]");

  FlowLine line;
  line.points.reserve(static_cast<std::size_t>(n_steps) + 1);
  line.points.push_back(start);

  auto rate = [&](double r, double th, FlowRate& out) {
    if (!(r > 0.0) || !std::isfinite(r)) return false;
    out = velocity_field({r, th}, pose, motion);
    return true;
  };

  PolarPoint p = start;
  for (int i = 0; i < n_steps; ++i) {
    FlowRate k1, k2, k3, k4;
    const double h = dt;
    bool ok = rate(p.r, p.theta, k1) &&
              rate(p.r + 0.5 * h * k1.dr_dt, p.theta + 0.5 * h * k1.dtheta_dt, k2) &&
              rate(p.r + 0.5 * h * k2.dr_dt, p.theta + 0.5 * h * k2.dtheta_dt, k3) &&
              rate(p.r + h * k3.dr_dt, p.theta + h * k3.dtheta_dt, k4);
    if (!ok) {
      line.end = FlowLineEnd::non_positive_r;
      return line;
    }
    PolarPoint next{
        p.r + h / 6.0 * (k1.dr_dt + 2.0 * k2.dr_dt + 2.0 * k3.dr_dt + k4.dr_dt),
        p.theta + h / 6.0 * (k1.dtheta_dt + 2.0 * k2.dtheta_dt + 2.0 * k3.dtheta_dt + k4.dtheta_dt)};
    if (!(next.r > 0.0) || !std::isfinite(next.r) || !std::isfinite(next.theta)) {
      line.end = FlowLineEnd::non_positive_r;
      return line;
    }
    if (next.r > r_max) {
      line.end = FlowLineEnd::left_range;
      return line;
    }
    if (std::abs(next.theta) > kPi / 2.0) {
      line.end = FlowLineEnd::left_fov;
      return line;
    }
    line.points.push_back(next);
    p = next;
  }
  return line;
}

Vec2 sensor_origin(const SensorPose& pose) {
  return {pose.l() * std::cos(pose.alpha()), -pose.l() * std::sin(pose.alpha())};
}

double sensor_heading(const SensorPose& pose) { return wrap_angle(-pose.delta()); }

Vec2 sensor_to_platform(PolarPoint p, const SensorPose& pose) {
  const double a = p.theta + pose.delta();
  return sensor_origin(pose) + Vec2{p.r * std::cos(a), -p.r * std::sin(a)};
}

PolarPoint platform_to_sensor(Vec2 q, const SensorPose& pose) {
  const Vec2 u = q - sensor_origin(pose);
  return {norm(u), wrap_angle(std::atan2(-u.y, u.x) - pose.delta())};
}

}  // namespace sonarnav
