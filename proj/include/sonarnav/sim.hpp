#pragma once

// Closed-loop simulation: sonar rendering, controller, guidance and unicycle
// kinematics at a fixed time step.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sonarnav/controller.hpp"
#include "sonarnav/guidance.hpp"
#include "sonarnav/scenario.hpp"
#include "sonarnav/sonar_sim.hpp"
#include "sonarnav/world.hpp"

namespace sonarnav {

struct RobotState {
  Pose2 pose;
  VelocityCommand command;
  double radius{0.1};
};

/// Post-rotation unicycle: yaw += omega dt, then translate along the new yaw.
/// V is clamped to +-V_max; dynamic obstacles advance by speed * dt.
std::pair<EnvironmentModel, RobotState> step_world(EnvironmentModel world, RobotState robot, VelocityCommand cmd,
                                                   double dt = 0.1, double V_max = 0.3);

struct CollisionEvent {
  double t{0.0};
  std::string entity;  // "segment", "circle" or "dynamic"
  std::size_t index{0};
  double clearance{0.0};  // distance to the entity minus robot radius (negative)
  Vec2 position;
};

/// Distance from the robot center to the nearest entity minus the robot radius.
struct Clearance {
  double value{0.0};
  std::string entity;
  std::size_t index{0};
};
std::optional<Clearance> nearest_clearance(const EnvironmentModel& world, Vec2 p, double radius);

/// Collision iff the center is closer than the radius to any entity.
std::optional<CollisionEvent> detect_collision(const EnvironmentModel& world, const RobotState& robot);

struct TrajectorySample {
  double t{0.0};
  Pose2 pose;
  VelocityCommand cmd_in;
  VelocityCommand cmd_out;
  Layer layer{Layer::PASS};
};

/// True iff the net displacement over some sliding window of `window_s`
/// seconds stays below `min_displacement`.
bool detect_stuck(std::span<const TrajectorySample> trajectory, double window_s = 10.0,
                  double min_displacement = 0.05);

struct StuckInterval {
  double t_start{0.0};
  double t_end{0.0};
};

enum class Outcome { running, goal, collision, stuck, timeout };
const char* to_string(Outcome o);

struct RunReport {
  std::string scenario;
  std::string setup;
  std::uint64_t seed{0};
  bool fast_sonar{true};
  Outcome outcome{Outcome::running};
  bool goal_reached{false};
  std::vector<CollisionEvent> collisions;
  std::vector<StuckInterval> stuck_intervals;
  double min_clearance{0.0};
  Pose2 final_pose;
  std::vector<TrajectorySample> trajectory;
  // Wall-clock statistics; not part of the deterministic output.
  double step_ms_mean{0.0};
  double step_ms_max{0.0};
  double controller_ms_mean{0.0};
  double controller_ms_max{0.0};

  double sim_time() const { return trajectory.empty() ? 0.0 : trajectory.back().t; }
  /// Pass/fail for a batch: goal reached without collision or stuck interval.
  bool success() const { return goal_reached && collisions.empty() && stuck_intervals.empty(); }
};

nlohmann::json to_json(const RunReport& r, bool include_timing = true);

/// `t,x,y,yaw,V_i,omega_i,V_o,omega_o,layer` with fixed precision.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectorySample> trajectory);

struct StepDiagnostics {
  std::size_t step{0};
  double t{0.0};
  LayerDecision decision;
  VelocityCommand cmd_in;
  VelocityCommand cmd_out;
};
nlohmann::json to_json(const StepDiagnostics& d);

/// Step-wise closed loop shared by batch runs and the live server.
class Simulation {
 public:
  Simulation(const Scenario& scenario, std::uint64_t seed, bool fast_sonar, std::string setup_label = {});

  /// Advance one tick. `operator_cmd` replaces guidance when given.
  const StepDiagnostics& step(std::optional<VelocityCommand> operator_cmd = std::nullopt);
  /// Runs until the outcome is decided.
  RunReport run(std::ostream* diagnostics = nullptr);

  bool finished() const { return outcome_ != Outcome::running; }
  Outcome outcome() const { return outcome_; }
  double time() const { return t_; }
  std::size_t step_index() const { return step_; }
  const RobotState& robot() const { return robot_; }
  const EnvironmentModel& world() const { return world_; }
  const std::vector<Energyscape>& energyscapes() const { return scapes_; }
  const ControllerMasks& masks() const { return masks_; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<SensorPose>& sensors() const { return sensors_; }
  const RunReport& report() const { return report_; }
  std::size_t waypoint_index() const { return wp_index_; }

  /// Renders the current energyscapes without advancing time.
  void render();

  /// Live mode keeps running through collisions and never declares stuck or timeout.
  void set_live(bool live) { live_ = live; }

 private:
  void finish(Outcome o);

  Scenario scenario_;
  std::vector<SensorPose> sensors_;
  SonarConfig sonar_;
  bool fast_;
  ControllerMasks masks_;
  std::vector<DeadZoneShadow> shadows_;
  EnvironmentModel world_;
  RobotState robot_;
  ControllerState ctrl_state_;
  std::size_t wp_index_{0};
  bool goal_{false};
  double t_{0.0};
  std::size_t step_{0};
  Outcome outcome_{Outcome::running};
  std::vector<Energyscape> scapes_;
  StepDiagnostics last_;
  RunReport report_;
  bool live_{false};
  std::vector<std::pair<double, Vec2>> pose_history_;
  std::size_t stuck_anchor_{0};
  double step_ms_sum_{0.0};
  double ctrl_ms_sum_{0.0};
};

/// Start pose drawn from the scenario's start zone.
Pose2 sample_start_pose(const Scenario& scenario, std::uint64_t seed);

RunReport run_scenario(const Scenario& scenario, std::uint64_t seed, bool fast_sonar, std::string setup_label = {},
                       std::ostream* diagnostics = nullptr);

/// World-aligned visit-count grid.
struct HeatMap {
  Vec2 origin;
  double cell{0.05};
  std::size_t nx{0}, ny{0};
  std::vector<std::uint32_t> counts;  // row-major, row = y index

  std::uint64_t total() const;
};

HeatMap aggregate_heatmap(std::span<const RunReport> reports, EnvironmentModel::Bounds bounds, double cell = 0.05);
/// Top row is the largest y; counts scaled to 0..255.
void write_heatmap_pgm(std::ostream& out, const HeatMap& h);
void write_heatmap_csv(std::ostream& out, const HeatMap& h);

}  // namespace sonarnav
