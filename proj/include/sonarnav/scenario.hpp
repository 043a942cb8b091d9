#pragma once

// Scenario files: JSON (comments allowed) with degrees and centimetres at the
// file boundary. The structs keep file units so that serialization round-trips
// exactly; conversion happens in the *_pose()/build helpers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sonarnav/controller.hpp"
#include "sonarnav/guidance.hpp"
#include "sonarnav/masks.hpp"
#include "sonarnav/sonar_sim.hpp"
#include "sonarnav/world.hpp"

namespace sonarnav {

struct FieldError {
  std::string field;  // JSON pointer-like path, e.g. "sensors[1].l_cm"
  std::string message;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

struct SensorSpec {
  double l_cm{0.0};
  double alpha_deg{0.0};
  double beta_deg{0.0};

  SensorPose pose() const { return SensorPose::from_table(l_cm, alpha_deg, beta_deg); }
  bool operator==(const SensorSpec&) const = default;
};

/// Sensor layouts of the ten simulated multi-sonar setups (rows 1..10).
std::vector<SensorSpec> standard_setup(int row);
inline constexpr int kStandardSetups = 10;

struct RegionSpec {
  std::string type;  // half_circle | circle | rectangle | corridor | trapezoid | sector
  double radius{0.0};
  double x_min{0.0}, x_max{0.0}, y_min{0.0}, y_max{0.0};
  double half_width{0.0};
  std::vector<Vec2> vertices;
  double span_deg{0.0};
  double heading_deg{0.0};

  ControlRegion region() const;
};

struct StartZone {
  double x_min{0.0}, x_max{0.0}, y_min{0.0}, y_max{0.0};
  double yaw_deg{0.0};
  double yaw_jitter_deg{0.0};
};

struct DGridSpec {
  double d_min{-2.5};
  double d_max{2.5};
  double step{0.05};
  double exclude_below{0.15};
};

struct SonarSpec {
  std::string mode{"fast"};  // "fast" or "full"
  Chirp chirp;
  Grid grid{Grid::canonical()};
  std::uint64_t array_seed{42};
  double noise_std{0.0};
  bool dead_zones{true};
  double psf_sigma_angle_deg{3.0};
  double psf_sigma_range_bins{2.0};
};

struct SimSpec {
  double dt_s{0.1};
  double timeout_s{300.0};
  double stuck_window_s{10.0};
  double stuck_min_displacement_m{0.05};
  double robot_radius_m{0.1};
  double V_max{0.3};
  double omega_max{2.0};
  std::optional<double> force_min_V;  // adversarial: floor on the output speed
};

struct Scenario {
  std::string name;
  std::uint64_t seed{1};
  EnvironmentModel world;
  StartZone start_zone;
  WaypointPlan plan;
  std::vector<SensorSpec> sensors;
  std::vector<int> setups;  // standard setups used by batch runs
  std::vector<RegionSpec> regions_ca, regions_oa, regions_rcf;
  ControllerConfig controller;
  DGridSpec d_grid;
  SonarSpec sonar;
  SimSpec sim;

  std::vector<SensorPose> sensor_poses() const;
  LayerRegions layer_regions() const;
  SonarConfig sonar_config() const;
};

/// Throws ScenarioError listing every offending field.
Scenario parse_scenario(const nlohmann::json& j);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& s);

/// Replace the sensors with a standard sensor setup.
Scenario with_setup(Scenario s, int row);

}  // namespace sonarnav
