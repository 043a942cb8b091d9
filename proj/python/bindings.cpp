#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <sstream>

#include "sonarnav/calibration.hpp"
#include "sonarnav/controller.hpp"
#include "sonarnav/energyscape.hpp"
#include "sonarnav/flow_model.hpp"
#include "sonarnav/masks.hpp"
#include "sonarnav/scenario.hpp"
#include "sonarnav/sim.hpp"
#include "sonarnav/sonar_sim.hpp"
#include "sonarnav/wire.hpp"

namespace py = pybind11;
using namespace sonarnav;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

py::array_t<float> to_numpy(const Energyscape& e) {
  py::array_t<float> a({e.grid.n_range, e.grid.n_angle});
  std::memcpy(a.mutable_data(), e.energy.data(), e.energy.size() * sizeof(float));
  return a;
}

Energyscape from_numpy(const FloatArray& a, const Grid& grid, int sensor) {
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != grid.n_range ||
      static_cast<std::size_t>(a.shape(1)) != grid.n_angle)
    throw std::invalid_argument("energyscape array must have shape (n_range, n_angle) of the grid");
  Energyscape e(grid, sensor, 0.0);
  std::memcpy(e.energy.data(), a.data(), e.energy.size() * sizeof(float));
  return e;
}

std::vector<ReflectionEvent> events_from(const std::vector<std::tuple<double, double, double, std::string>>& ev) {
  std::vector<ReflectionEvent> out;
  for (const auto& [r, b, a, kind] : ev) {
    ReflectorKind k = ReflectorKind::plane;
    if (kind == "corner") k = ReflectorKind::corner;
    else if (kind == "edge") k = ReflectorKind::edge;
    else if (kind != "plane") throw std::invalid_argument("reflector kind must be plane, corner or edge");
    out.push_back({r, b, a, k});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_sonarnav, m) {
  m.doc() = "Acoustic-flow subsumption navigation core";

  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<WireError>(m, "WireError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ScenarioError& e) {
      std::string msg = e.what();
      for (const auto& f : e.errors()) msg += "\n  " + f.field + ": " + f.message;
      PyErr_SetString(PyExc_ValueError, msg.c_str());
    }
  });

  py::class_<SensorPose>(m, "SensorPose")
      .def(py::init<double, double, double>(), py::arg("l") = 0.0, py::arg("alpha") = 0.0, py::arg("beta") = 0.0)
      .def_static("from_table", &SensorPose::from_table, py::arg("l_cm"), py::arg("alpha_deg"), py::arg("beta_deg"))
      .def_property_readonly("l", &SensorPose::l)
      .def_property_readonly("alpha", &SensorPose::alpha)
      .def_property_readonly("beta", &SensorPose::beta)
      .def_property_readonly("delta", &SensorPose::delta);

  m.def(
      "polar_to_cartesian",
      [](double r, double theta, double phi) {
        const auto c = polar_to_cartesian({r, theta}, phi);
        return std::make_tuple(c.x, c.y, c.z);
      },
      py::arg("r"), py::arg("theta"), py::arg("phi"));
  m.def(
      "velocity_field",
      [](double r, double theta, const SensorPose& pose, double V, double omega) {
        const auto f = velocity_field({r, theta}, pose, {V, omega});
        return std::make_pair(f.dr_dt, f.dtheta_dt);
      },
      py::arg("r"), py::arg("theta"), py::arg("pose"), py::arg("V"), py::arg("omega"));
  m.def(
      "linear_flow_constant", [](double r, double theta, const SensorPose& pose) {
        return linear_flow_constant({r, theta}, pose);
      },
      py::arg("r"), py::arg("theta"), py::arg("pose"));
  m.def(
      "integrate_flow_line",
      [](double r, double theta, const SensorPose& pose, double V, double omega, double dt, int n_steps) {
        const FlowLine fl = integrate_flow_line({r, theta}, pose, {V, omega}, dt, n_steps);
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : fl.points) pts.emplace_back(p.r, p.theta);
        return pts;
      },
      py::arg("r"), py::arg("theta"), py::arg("pose"), py::arg("V"), py::arg("omega"), py::arg("dt"),
      py::arg("n_steps"));

  py::class_<Grid>(m, "Grid")
      .def(py::init<>())
      .def_static("canonical", &Grid::canonical)
      .def_static("reduced", &Grid::reduced)
      .def_readwrite("n_range", &Grid::n_range)
      .def_readwrite("n_angle", &Grid::n_angle)
      .def_readwrite("range_bin", &Grid::range_bin)
      .def_readwrite("angle_min_deg", &Grid::angle_min_deg)
      .def_readwrite("angle_step_deg", &Grid::angle_step_deg)
      .def("range_center", &Grid::range_center)
      .def("angle_deg", &Grid::angle_deg);

  m.def(
      "full_energyscape",
      [](const std::vector<std::tuple<double, double, double, std::string>>& events, double noise_std,
         std::uint64_t noise_seed) {
        SonarConfig cfg;
        cfg.noise_std = noise_std;
        const auto ev = events_from(events);
        Energyscape e;
        {
          py::gil_scoped_release release;
          e = full_energyscape(ev, cfg, 0, 0.0, noise_seed);
        }
        return to_numpy(e);
      },
      "Full DSP chain on (range_m, bearing_deg, amplitude, kind) events; returns a (500, 181) array.",
      py::arg("events"), py::arg("noise_std") = 0.0, py::arg("noise_seed") = 0);
  m.def(
      "fast_energyscape",
      [](const std::vector<std::tuple<double, double, double, std::string>>& events) {
        return to_numpy(fast_energyscape(events_from(events), Grid::canonical()));
      },
      py::arg("events"));
  m.def(
      "write_energyscape",
      [](const std::string& path, const FloatArray& a, double timestamp) {
        Energyscape e = from_numpy(a, Grid::canonical(), 0);
        e.timestamp = timestamp;
        write_energyscape(std::filesystem::path(path), e);
      },
      py::arg("path"), py::arg("energy"), py::arg("timestamp") = 0.0);
  m.def(
      "read_energyscape",
      [](const std::string& path) {
        const Energyscape e = read_energyscape(std::filesystem::path(path));
        return py::make_tuple(to_numpy(e), e.timestamp);
      },
      py::arg("path"));

  py::class_<ControlRegion>(m, "ControlRegion")
      .def_static("half_circle", [](double r) { return ControlRegion{HalfCircle{r}}; }, py::arg("radius"))
      .def_static("circle", [](double r) { return ControlRegion{Circle{r}}; }, py::arg("radius"))
      .def_static(
          "rectangle",
          [](double x0, double x1, double y0, double y1) { return ControlRegion{Rectangle{x0, x1, y0, y1}}; },
          py::arg("x_min"), py::arg("x_max"), py::arg("y_min"), py::arg("y_max"))
      .def_static("corridor", [](double w) { return ControlRegion{Corridor{w}}; }, py::arg("half_width"))
      .def_static(
          "trapezoid",
          [](const std::vector<std::pair<double, double>>& v) {
            if (v.size() != 4) throw std::invalid_argument("trapezoid needs 4 vertices");
            Trapezoid t;
            for (std::size_t k = 0; k < 4; ++k) t.vertices[k] = {v[k].first, v[k].second};
            return ControlRegion{t};
          },
          py::arg("vertices"))
      .def_static(
          "sector", [](double span, double radius, double heading) { return ControlRegion{Sector{span, radius, heading}}; },
          py::arg("span"), py::arg("radius"), py::arg("heading") = 0.0)
      .def_property_readonly("kind", &ControlRegion::kind)
      .def("contains", [](const ControlRegion& r, double x, double y) { return r.contains({x, y}); })
      .def("mirrored", &ControlRegion::mirrored);

  m.def(
      "region_to_mask",
      [](const ControlRegion& region, const SensorPose& pose, const Grid& grid) {
        const TernaryMask t = region_to_mask(region, pose, grid);
        py::array_t<std::int8_t> a({grid.n_range, grid.n_angle});
        std::memcpy(a.mutable_data(), t.values.data(), t.values.size());
        return a;
      },
      py::arg("region"), py::arg("pose"), py::arg("grid") = Grid::canonical());
  m.def(
      "flowline_mask",
      [](double d, const SensorPose& pose, const Grid& grid) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& v : flowline_mask(d, pose, grid).voxels) out.emplace_back(v.range_idx, v.angle_idx);
        return out;
      },
      py::arg("d"), py::arg("pose"), py::arg("grid") = Grid::canonical());

  py::class_<ControllerConfig>(m, "ControllerConfig")
      .def(py::init<>())
      .def_readwrite("T_CA", &ControllerConfig::T_CA)
      .def_readwrite("T_OA", &ControllerConfig::T_OA)
      .def_readwrite("T_RCF", &ControllerConfig::T_RCF)
      .def_readwrite("T_AF_single", &ControllerConfig::T_AF_single)
      .def_readwrite("T_AFF_corr", &ControllerConfig::T_AFF_corr)
      .def_readwrite("lambda_OA", &ControllerConfig::lambda_OA)
      .def_readwrite("mu_OA", &ControllerConfig::mu_OA)
      .def_readwrite("lambda_RCF", &ControllerConfig::lambda_RCF)
      .def_readwrite("lambda_AFF", &ControllerConfig::lambda_AFF)
      .def_readwrite("omega_CA", &ControllerConfig::omega_CA)
      .def_readwrite("V_reverse", &ControllerConfig::V_reverse)
      .def_readwrite("ca_consecutive", &ControllerConfig::ca_consecutive)
      .def_readwrite("d_grid", &ControllerConfig::d_grid)
      .def("validate", &ControllerConfig::validate);

  py::class_<ControllerState>(m, "ControllerState")
      .def(py::init<>())
      .def_readwrite("ca_streak", &ControllerState::ca_streak)
      .def_readwrite("d_p", &ControllerState::d_p);

  py::class_<ControllerMasks>(m, "ControllerMasks")
      .def_static(
          "build",
          [](const std::vector<ControlRegion>& ca, const std::vector<ControlRegion>& oa,
             const std::vector<ControlRegion>& rcf, const std::vector<SensorPose>& sensors, const ControllerConfig& cfg,
             const Grid& grid) { return ControllerMasks::build({ca, oa, rcf}, sensors, grid, cfg.d_grid); },
          py::arg("ca"), py::arg("oa"), py::arg("rcf"), py::arg("sensors"), py::arg("config"),
          py::arg("grid") = Grid::canonical())
      .def_readonly("n_sensors", &ControllerMasks::n_sensors);

  m.def(
      "controller_step",
      [](const std::vector<FloatArray>& arrays, const ControllerMasks& masks, double V, double omega,
         const ControllerConfig& cfg, const ControllerState& state) {
        std::vector<Energyscape> scapes;
        for (std::size_t k = 0; k < arrays.size(); ++k)
          scapes.push_back(from_numpy(arrays[k], masks.grid, static_cast<int>(k)));
        const StepResult r = step(scapes, masks, {V, omega}, cfg, state);
        py::dict d;
        d["V"] = r.cmd_out.V;
        d["omega"] = r.cmd_out.omega;
        d["layer"] = to_string(r.decision.layer);
        d["triggered"] = r.decision.triggered;
        return py::make_tuple(d, r.state);
      },
      "One controller cycle. Returns ({V, omega, layer, triggered}, new_state).", py::arg("energyscapes"),
      py::arg("masks"), py::arg("V"), py::arg("omega"), py::arg("config"), py::arg("state"));

  m.def(
      "calibrate_thresholds",
      []() {
        ThresholdCalibration c;
        {
          py::gil_scoped_release release;
          c = calibrate_thresholds();
        }
        py::dict d;
        d["plane_peak"] = c.plane_peak;
        d["alignment_peak"] = c.alignment_peak;
        d["T_CA"] = c.T_CA;
        d["T_OA"] = c.T_OA;
        d["T_RCF"] = c.T_RCF;
        d["T_AF_single"] = c.T_AF_single;
        d["T_AFF_corr"] = c.T_AFF_corr;
        return d;
      });

  m.def(
      "scenario_json", [](const std::string& path) { return to_json(load_scenario(path)).dump(); },
      "Normalized scenario document as a JSON string.", py::arg("path"));
  m.def(
      "run_scenario",
      [](const std::string& path, std::uint64_t seed, bool fast_sonar, int setup) {
        Scenario s = load_scenario(path);
        std::string label;
        if (setup > 0) {
          s = with_setup(std::move(s), setup);
          label = "setup" + std::to_string(setup);
        }
        RunReport r;
        {
          py::gil_scoped_release release;
          r = run_scenario(s, seed, fast_sonar, label);
        }
        std::ostringstream csv;
        write_trajectory_csv(csv, r.trajectory);
        return py::make_tuple(to_json(r, true).dump(), csv.str());
      },
      "Returns (report JSON string, trajectory CSV text).", py::arg("path"), py::arg("seed") = 1,
      py::arg("fast_sonar") = true, py::arg("setup") = 0);

  m.def(
      "clamp_command",
      [](double V, double omega) {
        const VelocityCommand c = clamp_command({V, omega});
        return std::make_pair(c.V, c.omega);
      },
      py::arg("V"), py::arg("omega"));
  m.def(
      "parse_client_message",
      [](const std::string& line) {
        const ClientMessage msg = parse_client_message(line);
        py::dict d;
        if (const auto* c = std::get_if<CommandMessage>(&msg)) {
          d["type"] = "command";
          d["V"] = c->cmd.V;
          d["omega"] = c->cmd.omega;
        } else {
          const auto& ctl = std::get<ControlMessage>(msg);
          d["type"] = "control";
          d["action"] = to_string(ctl.action);
          if (!ctl.scenario.empty()) d["scenario"] = ctl.scenario;
        }
        return d;
      },
      py::arg("line"));
}
