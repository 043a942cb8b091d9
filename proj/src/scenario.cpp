#include "sonarnav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sonarnav {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
  std::string s = "invalid scenario:";
  for (const auto& e : errors) s += "\n  " + e.field + ": " + e.message;
  return s;
}

// Reads typed fields from a JSON object and records problems instead of
// throwing, so that one parse reports every bad field.
class Reader {
 public:
  explicit Reader(std::vector<FieldError>& errors) : errors_(errors) {}

  void fail(const std::string& field, const std::string& msg) { errors_.push_back({field, msg}); }

  const json* child(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(join(path, key), "required");
      return nullptr;
    }
    return &*it;
  }

  void number(const json& obj, const std::string& key, const std::string& path, double& out, bool required = false) {
    const json* v = child(obj, key, path, required);
    if (!v) return;
    if (!v->is_number() || !std::isfinite(v->get<double>())) {
      fail(join(path, key), "expected a finite number");
      return;
    }
    out = v->get<double>();
  }

  template <typename Int>
  void integer(const json& obj, const std::string& key, const std::string& path, Int& out, bool required = false) {
    const json* v = child(obj, key, path, required);
    if (!v) return;
    if (!v->is_number_integer()) {
      fail(join(path, key), "expected an integer");
      return;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (v->is_number_unsigned() || v->get<std::int64_t>() >= 0) {
        out = v->get<Int>();
        return;
      }
      fail(join(path, key), "expected a non-negative integer");
    } else {
      out = v->get<Int>();
    }
  }

  void boolean(const json& obj, const std::string& key, const std::string& path, bool& out) {
    const json* v = child(obj, key, path, false);
    if (!v) return;
    if (!v->is_boolean()) {
      fail(join(path, key), "expected true or false");
      return;
    }
    out = v->get<bool>();
  }

  void string(const json& obj, const std::string& key, const std::string& path, std::string& out,
              bool required = false) {
    const json* v = child(obj, key, path, required);
    if (!v) return;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return;
    }
    out = v->get<std::string>();
  }

  bool point(const json& v, const std::string& path, Vec2& out) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(path, "expected [x, y]");
      return false;
    }
    out = {v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(out.x) || !std::isfinite(out.y)) {
      fail(path, "non-finite coordinate");
      return false;
    }
    return true;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

 private:
  std::vector<FieldError>& errors_;
};

void parse_world(Reader& rd, const json& w, EnvironmentModel& world) {
  if (const json* segs = rd.child(w, "segments", "world", false)) {
    if (!segs->is_array()) rd.fail("world.segments", "expected an array");
    else
      for (std::size_t i = 0; i < segs->size(); ++i) {
        const std::string p = Reader::at("world.segments", i);
        const json& s = (*segs)[i];
        WallSegment seg;
        if (const json* a = rd.child(s, "a", p, true)) rd.point(*a, p + ".a", seg.a);
        if (const json* b = rd.child(s, "b", p, true)) rd.point(*b, p + ".b", seg.b);
        rd.number(s, "reflectivity", p, seg.reflectivity);
        if (seg.reflectivity < 0.0) rd.fail(p + ".reflectivity", "must be >= 0");
        if (norm(seg.b - seg.a) <= 0.0) rd.fail(p, "segment has zero length");
        world.segments.push_back(seg);
      }
  }
  if (const json* circles = rd.child(w, "circles", "world", false)) {
    if (!circles->is_array()) rd.fail("world.circles", "expected an array");
    else
      for (std::size_t i = 0; i < circles->size(); ++i) {
        const std::string p = Reader::at("world.circles", i);
        const json& c = (*circles)[i];
        CircleObstacle o;
        if (const json* ctr = rd.child(c, "center", p, true)) rd.point(*ctr, p + ".center", o.center);
        rd.number(c, "radius", p, o.radius, true);
        rd.number(c, "reflectivity", p, o.reflectivity);
        if (!(o.radius > 0.0)) rd.fail(p + ".radius", "must be > 0");
        if (o.reflectivity < 0.0) rd.fail(p + ".reflectivity", "must be >= 0");
        world.circles.push_back(o);
      }
  }
  if (const json* dyn = rd.child(w, "dynamic", "world", false)) {
    if (!dyn->is_array()) rd.fail("world.dynamic", "expected an array");
    else
      for (std::size_t i = 0; i < dyn->size(); ++i) {
        const std::string p = Reader::at("world.dynamic", i);
        const json& d = (*dyn)[i];
        DynamicObstacle o;
        rd.number(d, "radius", p, o.radius, true);
        rd.number(d, "speed", p, o.speed, true);
        rd.number(d, "reflectivity", p, o.reflectivity);
        if (!(o.radius > 0.0)) rd.fail(p + ".radius", "must be > 0");
        if (o.speed < 0.0) rd.fail(p + ".speed", "must be >= 0");
        if (const json* path = rd.child(d, "path", p, true)) {
          if (!path->is_array() || path->empty()) rd.fail(p + ".path", "expected a non-empty array of [x, y]");
          else
            for (std::size_t k = 0; k < path->size(); ++k) {
              Vec2 v;
              if (rd.point((*path)[k], Reader::at(p + ".path", k), v)) o.path.push_back(v);
            }
        }
        world.dynamic.push_back(o);
      }
  }
}

RegionSpec parse_region(Reader& rd, const json& r, const std::string& p) {
  RegionSpec s;
  rd.string(r, "type", p, s.type, true);
  if (s.type == "half_circle" || s.type == "circle") {
    rd.number(r, "radius", p, s.radius, true);
  } else if (s.type == "rectangle") {
    rd.number(r, "x_min", p, s.x_min, true);
    rd.number(r, "x_max", p, s.x_max, true);
    rd.number(r, "y_min", p, s.y_min, true);
    rd.number(r, "y_max", p, s.y_max, true);
  } else if (s.type == "corridor") {
    rd.number(r, "half_width", p, s.half_width, true);
  } else if (s.type == "trapezoid") {
    if (const json* v = rd.child(r, "vertices", p, true)) {
      if (!v->is_array() || v->size() != 4) rd.fail(p + ".vertices", "expected four [x, y] vertices");
      else
        for (std::size_t k = 0; k < 4; ++k) {
          Vec2 q;
          if (rd.point((*v)[k], Reader::at(p + ".vertices", k), q)) s.vertices.push_back(q);
        }
    }
  } else if (s.type == "sector") {
    rd.number(r, "span_deg", p, s.span_deg, true);
    rd.number(r, "radius", p, s.radius, true);
    rd.number(r, "heading_deg", p, s.heading_deg);
  } else if (!s.type.empty()) {
    rd.fail(p + ".type", "unknown region type '" + s.type + "'");
    return s;
  }
  if (s.type.empty()) return s;
  if (s.type == "trapezoid" && s.vertices.size() != 4) return s;
  try {
    (void)s.region();
  } catch (const std::invalid_argument& e) {
    rd.fail(p, e.what());
  }
  return s;
}

json region_json(const RegionSpec& r) {
  json j{{"type", r.type}};
  if (r.type == "half_circle" || r.type == "circle") {
    j["radius"] = r.radius;
  } else if (r.type == "rectangle") {
    j["x_min"] = r.x_min;
    j["x_max"] = r.x_max;
    j["y_min"] = r.y_min;
    j["y_max"] = r.y_max;
  } else if (r.type == "corridor") {
    j["half_width"] = r.half_width;
  } else if (r.type == "trapezoid") {
    j["vertices"] = json::array();
    for (const Vec2& v : r.vertices) j["vertices"].push_back({v.x, v.y});
  } else if (r.type == "sector") {
    j["span_deg"] = r.span_deg;
    j["radius"] = r.radius;
    j["heading_deg"] = r.heading_deg;
  }
  return j;
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

ScenarioError::ScenarioError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::vector<SensorSpec> standard_setup(int row) {
  switch (row) {
    case 1: return {{18, 0, 0}};
    case 2: return {{14, 0, -20}, {10, 90, -10}, {8, -90, -5}};
    case 3: return {{10, 90, -20}, {10, -90, 20}};
    case 4: return {{12, 0, 0}, {12, 90, 0}, {12, -90, 0}};
    case 5: return {{4, 45, 0}, {4, -135, 0}};
    case 6: return {{10, 0, 0}, {0, -180, 0}};
    case 7: return {{6, 0, 20}, {0, 90, 10}, {14, -90, 20}};
    case 8: return {{0, 0, 0}, {14, 120, -120}, {14, -120, 120}};
    case 9: return {{6, 180, -180}};
    case 10: return {{6, 45, -10}, {6, -45, 10}, {0, -180, 0}};
    default: throw std::out_of_range("standard_setup: row must be in 1..10");
  }
}

ControlRegion RegionSpec::region() const {
  if (type == "half_circle") return ControlRegion{HalfCircle{radius}};
  if (type == "circle") return ControlRegion{Circle{radius}};
  if (type == "rectangle") return ControlRegion{Rectangle{x_min, x_max, y_min, y_max}};
  if (type == "corridor") return ControlRegion{Corridor{half_width}};
  if (type == "trapezoid") {
    if (vertices.size() != 4) throw std::invalid_argument("region: trapezoid needs four vertices");
    return ControlRegion{Trapezoid{{vertices[0], vertices[1], vertices[2], vertices[3]}}};
  }
  if (type == "sector") return ControlRegion{Sector{deg2rad(span_deg), radius, deg2rad(heading_deg)}};
  throw std::invalid_argument("region: unknown type '" + type + "'");
}

std::vector<SensorPose> Scenario::sensor_poses() const {
  std::vector<SensorPose> out;
  for (const SensorSpec& s : sensors) out.push_back(s.pose());
  return out;
}

LayerRegions Scenario::layer_regions() const {
  LayerRegions lr;
  for (const auto& r : regions_ca) lr.ca.push_back(r.region());
  for (const auto& r : regions_oa) lr.oa.push_back(r.region());
  for (const auto& r : regions_rcf) lr.rcf.push_back(r.region());
  return lr;
}

SonarConfig Scenario::sonar_config() const {
  SonarConfig c;
  c.grid = sonar.grid;
  c.chirp = sonar.chirp;
  c.array = ArrayGeometry::generate(sonar.array_seed);
  c.noise_std = sonar.noise_std;
  c.psf_sigma_angle_deg = sonar.psf_sigma_angle_deg;
  c.psf_sigma_range_bins = sonar.psf_sigma_range_bins;
  return c;
}

Scenario parse_scenario(const json& j) {
  std::vector<FieldError> errors;
  Reader rd(errors);
  Scenario s;
  if (!j.is_object()) throw ScenarioError(std::vector<FieldError>{{"", "scenario must be a JSON object"}});

  static const char* known[] = {"name",    "seed",       "world",      "start_zone", "waypoints", "guidance",
                                "sensors", "setups",     "regions",    "controller", "sonar",     "sim"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known))
      rd.fail(it.key(), "unknown field");

  rd.string(j, "name", "", s.name);
  rd.integer(j, "seed", "", s.seed);

  if (const json* w = rd.child(j, "world", "", true)) parse_world(rd, *w, s.world);

  if (const json* z = rd.child(j, "start_zone", "", true)) {
    rd.number(*z, "x_min", "start_zone", s.start_zone.x_min, true);
    rd.number(*z, "x_max", "start_zone", s.start_zone.x_max, true);
    rd.number(*z, "y_min", "start_zone", s.start_zone.y_min, true);
    rd.number(*z, "y_max", "start_zone", s.start_zone.y_max, true);
    rd.number(*z, "yaw_deg", "start_zone", s.start_zone.yaw_deg);
    rd.number(*z, "yaw_jitter_deg", "start_zone", s.start_zone.yaw_jitter_deg);
    if (s.start_zone.x_max < s.start_zone.x_min || s.start_zone.y_max < s.start_zone.y_min)
      rd.fail("start_zone", "max must not be below min");
    if (s.start_zone.yaw_jitter_deg < 0.0) rd.fail("start_zone.yaw_jitter_deg", "must be >= 0");
  }

  if (const json* wps = rd.child(j, "waypoints", "", true)) {
    if (!wps->is_array() || wps->empty()) rd.fail("waypoints", "expected a non-empty array of [x, y]");
    else
      for (std::size_t i = 0; i < wps->size(); ++i) {
        Vec2 p;
        if (rd.point((*wps)[i], Reader::at("waypoints", i), p)) s.plan.waypoints.push_back(p);
      }
  }
  if (const json* g = rd.child(j, "guidance", "", false)) {
    rd.number(*g, "capture_radius", "guidance", s.plan.capture_radius);
    rd.number(*g, "cruise_V", "guidance", s.plan.cruise_V);
    rd.number(*g, "k_heading", "guidance", s.plan.k_heading);
    rd.number(*g, "omega_max", "guidance", s.plan.omega_max);
    if (!(s.plan.capture_radius > 0.0)) rd.fail("guidance.capture_radius", "must be > 0");
    if (s.plan.cruise_V < 0.0) rd.fail("guidance.cruise_V", "must be >= 0");
    if (!(s.plan.omega_max > 0.0)) rd.fail("guidance.omega_max", "must be > 0");
  }

  if (const json* ss = rd.child(j, "sensors", "", true)) {
    if (!ss->is_array() || ss->empty()) rd.fail("sensors", "expected at least one sensor");
    else
      for (std::size_t i = 0; i < ss->size(); ++i) {
        const std::string p = Reader::at("sensors", i);
        SensorSpec sp;
        rd.number((*ss)[i], "l_cm", p, sp.l_cm, true);
        rd.number((*ss)[i], "alpha_deg", p, sp.alpha_deg, true);
        rd.number((*ss)[i], "beta_deg", p, sp.beta_deg, true);
        if (sp.l_cm < 0.0) rd.fail(p + ".l_cm", "must be >= 0");
        s.sensors.push_back(sp);
      }
  }
  if (const json* su = rd.child(j, "setups", "", false)) {
    if (!su->is_array()) rd.fail("setups", "expected an array of standard setup numbers");
    else
      for (std::size_t i = 0; i < su->size(); ++i) {
        const json& v = (*su)[i];
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > kStandardSetups)
          rd.fail(Reader::at("setups", i), "expected an integer in 1..10");
        else
          s.setups.push_back(v.get<int>());
      }
  }

  if (const json* regs = rd.child(j, "regions", "", true)) {
    auto layer = [&](const char* key, std::vector<RegionSpec>& out) {
      const std::string p = std::string("regions.") + key;
      const json* arr = rd.child(*regs, key, "regions", true);
      if (!arr) return;
      if (!arr->is_array() || arr->empty()) {
        rd.fail(p, "expected a non-empty array of regions");
        return;
      }
      for (std::size_t i = 0; i < arr->size(); ++i) out.push_back(parse_region(rd, (*arr)[i], Reader::at(p, i)));
    };
    layer("ca", s.regions_ca);
    layer("oa", s.regions_oa);
    layer("rcf", s.regions_rcf);
  }

  if (const json* c = rd.child(j, "controller", "", false)) {
    ControllerConfig& cc = s.controller;
    const std::string p = "controller";
    rd.number(*c, "T_CA", p, cc.T_CA);
    rd.number(*c, "T_OA", p, cc.T_OA);
    rd.number(*c, "T_RCF", p, cc.T_RCF);
    rd.number(*c, "T_AF_single", p, cc.T_AF_single);
    rd.number(*c, "T_AFF_corr", p, cc.T_AFF_corr);
    rd.number(*c, "lambda_OA", p, cc.lambda_OA);
    rd.number(*c, "mu_OA", p, cc.mu_OA);
    rd.number(*c, "lambda_RCF", p, cc.lambda_RCF);
    rd.number(*c, "lambda_AFF", p, cc.lambda_AFF);
    rd.number(*c, "omega_CA", p, cc.omega_CA);
    rd.number(*c, "V_reverse", p, cc.V_reverse);
    rd.integer(*c, "ca_consecutive", p, cc.ca_consecutive);
    rd.number(*c, "V_max", p, cc.V_max);
    rd.number(*c, "peak_prominence", p, cc.peak_prominence);
    if (const json* d = rd.child(*c, "d_grid", p, false)) {
      rd.number(*d, "min", "controller.d_grid", s.d_grid.d_min);
      rd.number(*d, "max", "controller.d_grid", s.d_grid.d_max);
      rd.number(*d, "step", "controller.d_grid", s.d_grid.step);
      rd.number(*d, "exclude_below", "controller.d_grid", s.d_grid.exclude_below);
    }
  }
  try {
    s.controller.d_grid = ControllerConfig::make_d_grid(s.d_grid.d_min, s.d_grid.d_max, s.d_grid.step,
                                                        s.d_grid.exclude_below);
    s.controller.validate();
  } catch (const ConfigurationError& e) {
    rd.fail("controller", e.what());
  }

  if (const json* so = rd.child(j, "sonar", "", false)) {
    const std::string p = "sonar";
    rd.string(*so, "mode", p, s.sonar.mode);
    if (s.sonar.mode != "fast" && s.sonar.mode != "full") rd.fail("sonar.mode", "expected \"fast\" or \"full\"");
    if (const json* ch = rd.child(*so, "chirp", p, false)) {
      rd.number(*ch, "f_start_hz", "sonar.chirp", s.sonar.chirp.f_start);
      rd.number(*ch, "f_end_hz", "sonar.chirp", s.sonar.chirp.f_end);
      rd.number(*ch, "duration_s", "sonar.chirp", s.sonar.chirp.duration);
      rd.number(*ch, "sample_rate_hz", "sonar.chirp", s.sonar.chirp.sample_rate);
      try {
        s.sonar.chirp.validate();
      } catch (const std::invalid_argument& e) {
        rd.fail("sonar.chirp", e.what());
      }
    }
    if (const json* g = rd.child(*so, "grid", p, false)) {
      rd.integer(*g, "n_range", "sonar.grid", s.sonar.grid.n_range);
      rd.integer(*g, "n_angle", "sonar.grid", s.sonar.grid.n_angle);
      rd.number(*g, "range_bin_m", "sonar.grid", s.sonar.grid.range_bin);
      rd.number(*g, "angle_min_deg", "sonar.grid", s.sonar.grid.angle_min_deg);
      rd.number(*g, "angle_step_deg", "sonar.grid", s.sonar.grid.angle_step_deg);
      if (s.sonar.grid.n_range == 0 || s.sonar.grid.n_angle == 0) rd.fail("sonar.grid", "grid must be non-empty");
      if (!(s.sonar.grid.range_bin > 0.0) || !(s.sonar.grid.angle_step_deg > 0.0))
        rd.fail("sonar.grid", "bin sizes must be > 0");
    }
    rd.integer(*so, "array_seed", p, s.sonar.array_seed);
    rd.number(*so, "noise_std", p, s.sonar.noise_std);
    rd.boolean(*so, "dead_zones", p, s.sonar.dead_zones);
    rd.number(*so, "psf_sigma_angle_deg", p, s.sonar.psf_sigma_angle_deg);
    rd.number(*so, "psf_sigma_range_bins", p, s.sonar.psf_sigma_range_bins);
    if (s.sonar.noise_std < 0.0) rd.fail("sonar.noise_std", "must be >= 0");
    if (!(s.sonar.psf_sigma_angle_deg > 0.0) || !(s.sonar.psf_sigma_range_bins > 0.0))
      rd.fail("sonar", "psf widths must be > 0");
  }

  if (const json* sm = rd.child(j, "sim", "", false)) {
    const std::string p = "sim";
    SimSpec& m = s.sim;
    rd.number(*sm, "dt_s", p, m.dt_s);
    rd.number(*sm, "timeout_s", p, m.timeout_s);
    rd.number(*sm, "stuck_window_s", p, m.stuck_window_s);
    rd.number(*sm, "stuck_min_displacement_m", p, m.stuck_min_displacement_m);
    rd.number(*sm, "robot_radius_m", p, m.robot_radius_m);
    rd.number(*sm, "V_max", p, m.V_max);
    rd.number(*sm, "omega_max", p, m.omega_max);
    if (const json* f = rd.child(*sm, "force_min_V", p, false); f && !f->is_null()) {
      double v = 0.0;
      rd.number(*sm, "force_min_V", p, v);
      m.force_min_V = v;
    }
    if (!(m.dt_s > 0.0)) rd.fail("sim.dt_s", "must be > 0");
    if (!(m.timeout_s > 0.0)) rd.fail("sim.timeout_s", "must be > 0");
    if (!(m.stuck_window_s > 0.0)) rd.fail("sim.stuck_window_s", "must be > 0");
    if (m.stuck_min_displacement_m < 0.0) rd.fail("sim.stuck_min_displacement_m", "must be >= 0");
    if (!(m.robot_radius_m > 0.0)) rd.fail("sim.robot_radius_m", "must be > 0");
    if (!(m.V_max > 0.0)) rd.fail("sim.V_max", "must be > 0");
    if (!(m.omega_max > 0.0)) rd.fail("sim.omega_max", "must be > 0");
  }

  if (!errors.empty()) throw ScenarioError(std::move(errors));
  return s;
}

Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::vector<FieldError>{{"", std::string("JSON syntax error: ") + e.what()}});
  }
  return parse_scenario(j);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(std::vector<FieldError>{{"", "cannot open " + path.string()}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["seed"] = s.seed;

  json w{{"segments", json::array()}, {"circles", json::array()}, {"dynamic", json::array()}};
  for (const auto& seg : s.world.segments)
    w["segments"].push_back({{"a", point_json(seg.a)}, {"b", point_json(seg.b)}, {"reflectivity", seg.reflectivity}});
  for (const auto& c : s.world.circles)
    w["circles"].push_back({{"center", point_json(c.center)}, {"radius", c.radius}, {"reflectivity", c.reflectivity}});
  for (const auto& d : s.world.dynamic) {
    json path = json::array();
    for (const Vec2& p : d.path) path.push_back(point_json(p));
    w["dynamic"].push_back(
        {{"radius", d.radius}, {"speed", d.speed}, {"path", path}, {"reflectivity", d.reflectivity}});
  }
  j["world"] = w;

  j["start_zone"] = {{"x_min", s.start_zone.x_min},     {"x_max", s.start_zone.x_max},
                     {"y_min", s.start_zone.y_min},     {"y_max", s.start_zone.y_max},
                     {"yaw_deg", s.start_zone.yaw_deg}, {"yaw_jitter_deg", s.start_zone.yaw_jitter_deg}};
  j["waypoints"] = json::array();
  for (const Vec2& p : s.plan.waypoints) j["waypoints"].push_back(point_json(p));
  j["guidance"] = {{"capture_radius", s.plan.capture_radius},
                   {"cruise_V", s.plan.cruise_V},
                   {"k_heading", s.plan.k_heading},
                   {"omega_max", s.plan.omega_max}};
  j["sensors"] = json::array();
  for (const auto& sp : s.sensors)
    j["sensors"].push_back({{"l_cm", sp.l_cm}, {"alpha_deg", sp.alpha_deg}, {"beta_deg", sp.beta_deg}});
  j["setups"] = s.setups;

  json regs;
  for (auto [key, vec] : {std::pair{"ca", &s.regions_ca}, {"oa", &s.regions_oa}, {"rcf", &s.regions_rcf}}) {
    regs[key] = json::array();
    for (const auto& r : *vec) regs[key].push_back(region_json(r));
  }
  j["regions"] = regs;

  const ControllerConfig& c = s.controller;
  j["controller"] = {{"T_CA", c.T_CA},
                     {"T_OA", c.T_OA},
                     {"T_RCF", c.T_RCF},
                     {"T_AF_single", c.T_AF_single},
                     {"T_AFF_corr", c.T_AFF_corr},
                     {"lambda_OA", c.lambda_OA},
                     {"mu_OA", c.mu_OA},
                     {"lambda_RCF", c.lambda_RCF},
                     {"lambda_AFF", c.lambda_AFF},
                     {"omega_CA", c.omega_CA},
                     {"V_reverse", c.V_reverse},
                     {"ca_consecutive", c.ca_consecutive},
                     {"V_max", c.V_max},
                     {"peak_prominence", c.peak_prominence},
                     {"d_grid",
                      {{"min", s.d_grid.d_min},
                       {"max", s.d_grid.d_max},
                       {"step", s.d_grid.step},
                       {"exclude_below", s.d_grid.exclude_below}}}};

  const SonarSpec& so = s.sonar;
  j["sonar"] = {{"mode", so.mode},
                {"chirp",
                 {{"f_start_hz", so.chirp.f_start},
                  {"f_end_hz", so.chirp.f_end},
                  {"duration_s", so.chirp.duration},
                  {"sample_rate_hz", so.chirp.sample_rate}}},
                {"grid",
                 {{"n_range", so.grid.n_range},
                  {"n_angle", so.grid.n_angle},
                  {"range_bin_m", so.grid.range_bin},
                  {"angle_min_deg", so.grid.angle_min_deg},
                  {"angle_step_deg", so.grid.angle_step_deg}}},
                {"array_seed", so.array_seed},
                {"noise_std", so.noise_std},
                {"dead_zones", so.dead_zones},
                {"psf_sigma_angle_deg", so.psf_sigma_angle_deg},
                {"psf_sigma_range_bins", so.psf_sigma_range_bins}};

  const SimSpec& m = s.sim;
  j["sim"] = {{"dt_s", m.dt_s},
              {"timeout_s", m.timeout_s},
              {"stuck_window_s", m.stuck_window_s},
              {"stuck_min_displacement_m", m.stuck_min_displacement_m},
              {"robot_radius_m", m.robot_radius_m},
              {"V_max", m.V_max},
              {"omega_max", m.omega_max},
              {"force_min_V", m.force_min_V ? json(*m.force_min_V) : json(nullptr)}};
  return j;
}

Scenario with_setup(Scenario s, int row) {
  s.sensors = standard_setup(row);
  return s;
}

}  // namespace sonarnav
