#include "sonarnav/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace sonarnav {

using nlohmann::json;

std::pair<EnvironmentModel, RobotState> step_world(EnvironmentModel world, RobotState robot, VelocityCommand cmd,
                                                   double dt, double V_max) {
  world.advance(dt);
  cmd.V = std::clamp(cmd.V, -V_max, V_max);
  robot.command = cmd;
  robot.pose.yaw = wrap_angle(robot.pose.yaw + cmd.omega * dt);
  robot.pose.x += cmd.V * std::cos(robot.pose.yaw) * dt;
  robot.pose.y += cmd.V * std::sin(robot.pose.yaw) * dt;
  return {std::move(world), robot};
}

std::optional<Clearance> nearest_clearance(const EnvironmentModel& world, Vec2 p, double radius) {
  std::optional<Clearance> best;
  auto consider = [&](double dist, const char* entity, std::size_t i) {
    const double c = dist - radius;
    if (!best || c < best->value) best = Clearance{c, entity, i};
  };
  for (std::size_t i = 0; i < world.segments.size(); ++i)
    consider(distance_to_segment(p, world.segments[i].a, world.segments[i].b), "segment", i);
  for (std::size_t i = 0; i < world.circles.size(); ++i)
    consider(norm(p - world.circles[i].center) - world.circles[i].radius, "circle", i);
  for (std::size_t i = 0; i < world.dynamic.size(); ++i)
    consider(norm(p - world.dynamic[i].position()) - world.dynamic[i].radius, "dynamic", i);
  return best;
}

std::optional<CollisionEvent> detect_collision(const EnvironmentModel& world, const RobotState& robot) {
  const Vec2 p{robot.pose.x, robot.pose.y};
  const auto c = nearest_clearance(world, p, robot.radius);
  if (!c || !(c->value < 0.0)) return std::nullopt;
  return CollisionEvent{0.0, c->entity, c->index, c->value, p};
}

bool detect_stuck(std::span<const TrajectorySample> trajectory, double window_s, double min_displacement) {
  std::size_t j = 0;
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const double t = trajectory[k].t;
    while (j + 1 <= k && trajectory[j + 1].t <= t - window_s + 1e-9) ++j;
    if (t - trajectory[j].t < window_s - 1e-9) continue;
    const double dx = trajectory[k].pose.x - trajectory[j].pose.x;
    const double dy = trajectory[k].pose.y - trajectory[j].pose.y;
    if (std::hypot(dx, dy) < min_displacement) return true;
  }
  return false;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::running: return "running";
    case Outcome::goal: return "goal";
    case Outcome::collision: return "collision";
    case Outcome::stuck: return "stuck";
    case Outcome::timeout: return "timeout";
  }
  return "running";
}

namespace {

json cmd_json(VelocityCommand c) { return {{"V", c.V}, {"omega", c.omega}}; }

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

json to_json(const RunReport& r, bool include_timing) {
  json j;
  j["scenario"] = r.scenario;
  j["setup"] = r.setup;
  j["seed"] = r.seed;
  j["fast_sonar"] = r.fast_sonar;
  j["outcome"] = to_string(r.outcome);
  j["goal_reached"] = r.goal_reached;
  j["collisions"] = json::array();
  for (const auto& c : r.collisions)
    j["collisions"].push_back({{"t", c.t},
                               {"entity", c.entity},
                               {"index", c.index},
                               {"clearance", c.clearance},
                               {"x", c.position.x},
                               {"y", c.position.y}});
  j["stuck_intervals"] = json::array();
  for (const auto& s : r.stuck_intervals) j["stuck_intervals"].push_back({{"t_start", s.t_start}, {"t_end", s.t_end}});
  j["min_clearance"] = r.min_clearance;
  j["sim_time"] = r.sim_time();
  j["steps"] = r.trajectory.size();

  json counts = json::object();
  for (Layer l : {Layer::CA, Layer::OA, Layer::AFF, Layer::RCF, Layer::PASS}) counts[to_string(l)] = 0;
  json timeline = json::array();
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const auto& s = r.trajectory[k];
    counts[to_string(s.layer)] = counts[to_string(s.layer)].get<int>() + 1;
    if (k == 0 || r.trajectory[k - 1].layer != s.layer) timeline.push_back({{"t", s.t}, {"layer", to_string(s.layer)}});
  }
  j["layer_counts"] = counts;
  j["layer_timeline"] = timeline;
  json traj = json::array();
  for (const auto& s : r.trajectory) traj.push_back({s.t, s.pose.x, s.pose.y, s.pose.yaw});
  j["trajectory"] = traj;
  if (include_timing)
    j["timing"] = {{"step_ms_mean", r.step_ms_mean},
                   {"step_ms_max", r.step_ms_max},
                   {"controller_ms_mean", r.controller_ms_mean},
                   {"controller_ms_max", r.controller_ms_max}};
  return j;
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> trajectory) {
  out << "t,x,y,yaw,V_i,omega_i,V_o,omega_o,layer\n";
  char buf[256];
  for (const auto& s : trajectory) {
    std::snprintf(buf, sizeof buf, "%.1f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s\n", s.t, s.pose.x, s.pose.y, s.pose.yaw,
                  s.cmd_in.V, s.cmd_in.omega, s.cmd_out.V, s.cmd_out.omega, to_string(s.layer));
    out << buf;
  }
}

json to_json(const StepDiagnostics& d) {
  const Diagnostics& g = d.decision.diagnostics;
  json j{{"step", d.step},
         {"t", d.t},
         {"layer", to_string(d.decision.layer)},
         {"triggered", d.decision.triggered},
         {"cmd_in", cmd_json(d.cmd_in)},
         {"cmd_out", cmd_json(d.cmd_out)},
         {"masked_sum", g.masked_sum},
         {"ratio", g.ratio}};
  json peaks = json::array();
  for (const auto& p : g.peaks) peaks.push_back({p.d, p.value});
  j["peaks"] = peaks;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  j["d_s"] = opt(g.d_s);
  j["d_l"] = opt(g.d_l);
  j["d_r"] = opt(g.d_r);
  return j;
}

Pose2 sample_start_pose(const Scenario& scenario, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const StartZone& z = scenario.start_zone;
  Pose2 p;
  p.x = z.x_min + (z.x_max - z.x_min) * unit_uniform(rng);
  p.y = z.y_min + (z.y_max - z.y_min) * unit_uniform(rng);
  p.yaw = wrap_angle(deg2rad(z.yaw_deg + z.yaw_jitter_deg * (2.0 * unit_uniform(rng) - 1.0)));
  return p;
}

Simulation::Simulation(const Scenario& scenario, std::uint64_t seed, bool fast_sonar, std::string setup_label)
    : scenario_(scenario),
      sensors_(scenario.sensor_poses()),
      sonar_(scenario.sonar_config()),
      fast_(fast_sonar),
      world_(scenario.world) {
  scenario_.controller.validate();
  scenario_.plan.validate();
  masks_ = ControllerMasks::build(scenario_.layer_regions(), sensors_, sonar_.grid, scenario_.controller.d_grid);
  const auto occl = mutual_occlusion(sensors_);
  for (std::size_t j = 0; j < sensors_.size(); ++j) {
    if (scenario_.sonar.dead_zones)
      shadows_.push_back(compute_shadow(occl[j], sensors_[j], sonar_.grid));
    else
      shadows_.push_back({std::vector<std::size_t>(sonar_.grid.n_angle, sonar_.grid.n_range)});
  }
  robot_.pose = sample_start_pose(scenario_, seed);
  robot_.radius = scenario_.sim.robot_radius_m;
  report_.scenario = scenario_.name;
  report_.setup = std::move(setup_label);
  report_.seed = seed;
  report_.fast_sonar = fast_;
  const auto c = nearest_clearance(world_, {robot_.pose.x, robot_.pose.y}, robot_.radius);
  report_.min_clearance = c ? c->value : std::numeric_limits<double>::infinity();
  pose_history_.push_back({0.0, {robot_.pose.x, robot_.pose.y}});
  if (c && c->value < 0.0) {
    report_.collisions.push_back({0.0, c->entity, c->index, c->value, {robot_.pose.x, robot_.pose.y}});
    finish(Outcome::collision);
  }
}

void Simulation::render() {
  scapes_.resize(sensors_.size());
  for (std::size_t j = 0; j < sensors_.size(); ++j) {
    const SensorWorldPose swp = sensor_world_pose(robot_.pose, sensors_[j]);
    const auto events = trace_reflections(world_, swp, sonar_.grid.r_max());
    const int idx = static_cast<int>(j);
    if (fast_) {
      scapes_[j] = fast_energyscape(events, sonar_.grid, {sonar_.psf_sigma_angle_deg, sonar_.psf_sigma_range_bins},
                                    sonar_.factors, idx, t_);
    } else {
      const std::uint64_t noise_seed = report_.seed * 1000003ULL + step_ * 131ULL + j;
      scapes_[j] = full_energyscape(events, sonar_, idx, t_, noise_seed);
    }
    shadows_[j].apply(scapes_[j]);
  }
}

void Simulation::finish(Outcome o) {
  outcome_ = o;
  report_.outcome = o;
  report_.goal_reached = goal_;
  report_.final_pose = robot_.pose;
  const double n = static_cast<double>(std::max<std::size_t>(1, report_.trajectory.size()));
  report_.step_ms_mean = step_ms_sum_ / n;
  report_.controller_ms_mean = ctrl_ms_sum_ / n;
}

const StepDiagnostics& Simulation::step(std::optional<VelocityCommand> operator_cmd) {
  if (finished()) return last_;
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const SimSpec& sim = scenario_.sim;

  VelocityCommand cmd_in;
  if (operator_cmd) {
    cmd_in = *operator_cmd;
  } else {
    const GuidanceOutput g = input_command(robot_.pose, scenario_.plan, wp_index_, goal_);
    wp_index_ = g.active_index;
    cmd_in = g.cmd;
    if (g.goal_reached) {
      goal_ = true;
      last_ = StepDiagnostics{step_, t_, {}, {}, {}};
      report_.trajectory.push_back({t_, robot_.pose, {}, {}, Layer::PASS});
      finish(Outcome::goal);
      return last_;
    }
  }

  render();
  const auto tc = clock::now();
  StepResult r = sonarnav::step(scapes_, masks_, cmd_in, scenario_.controller, ctrl_state_);
  const double ctrl_ms = std::chrono::duration<double, std::milli>(clock::now() - tc).count();
  ctrl_state_ = r.state;

  VelocityCommand out = r.cmd_out;
  if (sim.force_min_V) out.V = std::max(out.V, *sim.force_min_V);
  out.V = std::clamp(out.V, -sim.V_max, sim.V_max);
  out.omega = std::clamp(out.omega, -sim.omega_max, sim.omega_max);

  report_.trajectory.push_back({t_, robot_.pose, cmd_in, out, r.decision.layer});
  last_ = StepDiagnostics{step_, t_, std::move(r.decision), cmd_in, out};

  auto [w, rb] = step_world(std::move(world_), robot_, out, sim.dt_s, sim.V_max);
  world_ = std::move(w);
  robot_ = rb;
  ++step_;
  t_ = static_cast<double>(step_) * sim.dt_s;

  const double step_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  step_ms_sum_ += step_ms;
  ctrl_ms_sum_ += ctrl_ms;
  report_.step_ms_max = std::max(report_.step_ms_max, step_ms);
  report_.controller_ms_max = std::max(report_.controller_ms_max, ctrl_ms);

  const Vec2 p{robot_.pose.x, robot_.pose.y};
  if (const auto c = nearest_clearance(world_, p, robot_.radius)) {
    report_.min_clearance = std::min(report_.min_clearance, c->value);
    if (c->value < 0.0) {
      report_.collisions.push_back({t_, c->entity, c->index, c->value, p});
      if (!live_) {
        finish(Outcome::collision);
        return last_;
      }
    }
  }

  pose_history_.push_back({t_, p});
  if (!live_) {
    while (stuck_anchor_ + 1 < pose_history_.size() &&
           pose_history_[stuck_anchor_ + 1].first <= t_ - sim.stuck_window_s + 1e-9)
      ++stuck_anchor_;
    const auto& [ta, pa] = pose_history_[stuck_anchor_];
    if (t_ - ta >= sim.stuck_window_s - 1e-9 && norm(p - pa) < sim.stuck_min_displacement_m) {
      report_.stuck_intervals.push_back({ta, t_});
      finish(Outcome::stuck);
      return last_;
    }
    if (t_ >= sim.timeout_s - 1e-9) finish(Outcome::timeout);
  }
  return last_;
}

RunReport Simulation::run(std::ostream* diagnostics) {
  while (!finished()) {
    const StepDiagnostics& d = step();
    if (diagnostics && (d.decision.layer != Layer::PASS || d.decision.triggered || d.cmd_in.V != 0.0 ||
                        d.cmd_in.omega != 0.0))
      *diagnostics << to_json(d).dump() << '\n';
  }
  return report_;
}

RunReport run_scenario(const Scenario& scenario, std::uint64_t seed, bool fast_sonar, std::string setup_label,
                       std::ostream* diagnostics) {
  Simulation sim(scenario, seed, fast_sonar, std::move(setup_label));
  return sim.run(diagnostics);
}

std::uint64_t HeatMap::total() const {
  std::uint64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

HeatMap aggregate_heatmap(std::span<const RunReport> reports, EnvironmentModel::Bounds bounds, double cell) {
  if (!(cell > 0.0)) throw std::invalid_argument("heatmap: cell must be > 0");
  HeatMap h;
  h.cell = cell;
  // Grow the bounds to cover every sample.
  for (const auto& r : reports)
    for (const auto& s : r.trajectory) {
      bounds.min.x = std::min(bounds.min.x, s.pose.x);
      bounds.min.y = std::min(bounds.min.y, s.pose.y);
      bounds.max.x = std::max(bounds.max.x, s.pose.x);
      bounds.max.y = std::max(bounds.max.y, s.pose.y);
    }
  h.origin = {std::floor(bounds.min.x / cell) * cell, std::floor(bounds.min.y / cell) * cell};
  h.nx = static_cast<std::size_t>(std::floor((bounds.max.x - h.origin.x) / cell)) + 1;
  h.ny = static_cast<std::size_t>(std::floor((bounds.max.y - h.origin.y) / cell)) + 1;
  h.counts.assign(h.nx * h.ny, 0);
  for (const auto& r : reports)
    for (const auto& s : r.trajectory) {
      const auto ix = std::min(h.nx - 1, static_cast<std::size_t>(std::floor((s.pose.x - h.origin.x) / cell)));
      const auto iy = std::min(h.ny - 1, static_cast<std::size_t>(std::floor((s.pose.y - h.origin.y) / cell)));
      ++h.counts[iy * h.nx + ix];
    }
  return h;
}

void write_heatmap_pgm(std::ostream& out, const HeatMap& h) {
  out << "P5\n" << h.nx << ' ' << h.ny << "\n255\n";
  const std::uint32_t mx = h.counts.empty() ? 0 : *std::max_element(h.counts.begin(), h.counts.end());
  for (std::size_t row = 0; row < h.ny; ++row) {
    const std::size_t iy = h.ny - 1 - row;
    for (std::size_t ix = 0; ix < h.nx; ++ix) {
      const std::uint32_t c = h.counts[iy * h.nx + ix];
      const auto px = mx == 0 ? 0 : static_cast<unsigned>(std::lround(255.0 * c / mx));
      out.put(static_cast<char>(px));
    }
  }
}

void write_heatmap_csv(std::ostream& out, const HeatMap& h) {
  out << "x,y,count\n";
  char buf[96];
  for (std::size_t iy = 0; iy < h.ny; ++iy)
    for (std::size_t ix = 0; ix < h.nx; ++ix) {
      const std::uint32_t c = h.counts[iy * h.nx + ix];
      if (c == 0) continue;
      std::snprintf(buf, sizeof buf, "%.3f,%.3f,%u\n", h.origin.x + (ix + 0.5) * h.cell,
                    h.origin.y + (iy + 0.5) * h.cell, c);
      out << buf;
    }
}

}  // namespace sonarnav
