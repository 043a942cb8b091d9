#include "sonarnav/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sonarnav/calibration.hpp"
#include "sonarnav/figures.hpp"
#include "sonarnav/live.hpp"
#include "sonarnav/scenario.hpp"
#include "sonarnav/server.hpp"
#include "sonarnav/sim.hpp"

namespace sonarnav {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct RunGroup {
  std::string label;
  std::vector<RunReport> reports;
};

std::string setup_label(int row) { return row > 0 ? "setup" + std::to_string(row) : "scenario"; }

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

RunGroup run_group(const Scenario& scenario, int setup, int reps, std::uint64_t seed, bool fast, const fs::path& out_dir) {
  RunGroup g;
  g.label = setup_label(setup);
  const Scenario sc = setup > 0 ? with_setup(scenario, setup) : scenario;
  for (int k = 0; k < reps; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const fs::path dir = out_dir / (g.label + "_seed" + std::to_string(s));
    fs::create_directories(dir);
    std::ofstream diag(dir / "diagnostics.ndjson", std::ios::binary);
    RunReport r = run_scenario(sc, s, fast, g.label, &diag);
    std::ostringstream csv;
    write_trajectory_csv(csv, r.trajectory);
    write_file(dir / "trajectory.csv", csv.str());
    write_file(dir / "report.json", to_json(r).dump(2) + "\n");
    g.reports.push_back(std::move(r));
  }
  return g;
}

void write_aggregate(const std::vector<RunGroup>& groups, const Scenario& scenario, const fs::path& out_dir) {
  std::vector<RunReport> all;
  for (const auto& g : groups) all.insert(all.end(), g.reports.begin(), g.reports.end());
  const HeatMap h = aggregate_heatmap(all, scenario.world.bounds());
  std::ostringstream pgm, csv;
  write_heatmap_pgm(pgm, h);
  write_heatmap_csv(csv, h);
  write_file(out_dir / "heatmap.pgm", pgm.str());
  write_file(out_dir / "heatmap.csv", csv.str());
}

int summarize(const std::vector<RunGroup>& groups, const fs::path& out_dir, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %5s %10s %6s %7s %10s %12s\n", "setup", "runs", "collisions", "stuck",
                "goals", "goal_rate", "step_ms_mean");
  out << buf;
  json summary = json::array();
  bool ok = true;
  for (const auto& g : groups) {
    std::size_t collisions = 0, stuck = 0, goals = 0;
    double ms = 0.0;
    for (const auto& r : g.reports) {
      collisions += r.collisions.size();
      stuck += r.stuck_intervals.size();
      goals += r.goal_reached ? 1 : 0;
      ms += r.step_ms_mean;
      ok = ok && r.success();
    }
    const double n = static_cast<double>(g.reports.size());
    std::snprintf(buf, sizeof buf, "%-10s %5zu %10zu %6zu %7zu %10.2f %12.3f\n", g.label.c_str(), g.reports.size(),
                  collisions, stuck, goals, n > 0 ? goals / n : 0.0, n > 0 ? ms / n : 0.0);
    out << buf;
    summary.push_back({{"setup", g.label},
                       {"runs", g.reports.size()},
                       {"collisions", collisions},
                       {"stuck", stuck},
                       {"goals", goals}});
  }
  write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  return ok ? 0 : 1;
}

std::vector<TrajectorySample> read_trajectory_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<TrajectorySample> out;
  while (std::getline(in, line)) {
    TrajectorySample s;
    char layer[16] = {0};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%15s", &s.t, &s.pose.x, &s.pose.y, &s.pose.yaw,
                    &s.cmd_in.V, &s.cmd_in.omega, &s.cmd_out.V, &s.cmd_out.omega, layer) == 9)
      s.layer = layer_from_string(layer);
    out.push_back(s);
  }
  return out;
}

void export_figures(const Scenario& scenario, const fs::path& out_dir, const fs::path& runs_dir, std::ostream& out) {
  fs::create_directories(out_dir);
  const auto poses = scenario.sensor_poses();
  const SonarConfig sonar = scenario.sonar_config();
  const ControllerMasks masks =
      ControllerMasks::build(scenario.layer_regions(), poses, sonar.grid, scenario.controller.d_grid);
  std::size_t files = 0;
  for (std::size_t j = 0; j < poses.size(); ++j) {
    for (const auto& [name, vec] : {std::pair{"ca", &masks.ca}, {"oa", &masks.oa}, {"rcf", &masks.rcf}}) {
      std::ostringstream o;
      write_mask_pgm(o, (*vec)[j]);
      write_file(out_dir / ("mask_" + std::string(name) + "_sensor" + std::to_string(j) + ".pgm"), o.str());
      ++files;
    }
    // Linear flow-lines through a fan of start points, and the rotational field.
    std::vector<PolarPoint> starts;
    for (double r : {1.0, 2.0, 3.0})
      for (double deg = -75.0; deg <= 75.0; deg += 25.0) starts.push_back({r, deg2rad(deg)});
    std::ostringstream lin, rot;
    write_ppm(lin, plot_flow_lines(poses[j], {0.3, 0.0}, starts, sonar.grid, 10.0, 0.01));
    write_ppm(rot, plot_flow_lines(poses[j], {0.0, 0.3}, starts, sonar.grid, 3.0, 0.001));
    write_file(out_dir / ("flowlines_linear_sensor" + std::to_string(j) + ".ppm"), lin.str());
    write_file(out_dir / ("flowlines_rotation_sensor" + std::to_string(j) + ".ppm"), rot.str());
    files += 2;
  }
  std::vector<std::vector<TrajectorySample>> runs;
  if (!runs_dir.empty() && fs::exists(runs_dir)) {
    std::vector<fs::path> csvs;
    for (const auto& e : fs::recursive_directory_iterator(runs_dir))
      if (e.path().filename() == "trajectory.csv") csvs.push_back(e.path());
    std::sort(csvs.begin(), csvs.end());
    for (const auto& p : csvs) runs.push_back(read_trajectory_csv(p));
  }
  std::ostringstream map;
  write_ppm(map, plot_trajectories(scenario.world, runs));
  write_file(out_dir / "trajectories.ppm", map.str());
  ++files;
  if (!runs.empty()) {
    std::vector<RunReport> reports(runs.size());
    for (std::size_t k = 0; k < runs.size(); ++k) reports[k].trajectory = runs[k];
    std::ostringstream pgm;
    write_heatmap_pgm(pgm, aggregate_heatmap(reports, scenario.world.bounds()));
    write_file(out_dir / "heatmap.pgm", pgm.str());
    ++files;
  }
  out << "wrote " << files << " files to " << out_dir.string() << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Acoustic-flow multi-sonar navigation simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", runs_dir;
  int setup = 0, reps = 1;
  std::optional<std::uint64_t> seed;
  bool fast = false;
  unsigned short port = 8765;

  auto add_common = [&](CLI::App* sub, bool with_reps) {
    sub->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_flag("--fast-sonar", fast, "Use the fast point-spread sonar model");
    if (with_reps) {
      sub->add_option("--setup", setup, "Replace the sensors with a standard sensor setup (1-10)")->check(CLI::Range(1, 10));
      sub->add_option("--reps", reps, "Repetitions (consecutive seeds)")->check(CLI::PositiveNumber);
      sub->add_option("--seed", seed, "First seed (default: scenario seed)");
    }
  };
  CLI::App* run = app.add_subcommand("run", "Run a scenario for one sensor setup");
  add_common(run, true);
  CLI::App* batch = app.add_subcommand("batch", "Run every configured setup (default: all standard setups)");
  add_common(batch, true);
  CLI::App* serve_cmd = app.add_subcommand("serve", "Live WebSocket service for teleoperation");
  serve_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--seed", seed, "Seed for the start pose");
  serve_cmd->add_flag("--fast-sonar", fast, "Use the fast point-spread sonar model");
  CLI::App* exp = app.add_subcommand("export", "Write flow-line, mask, trajectory and heat-map figures");
  exp->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  exp->add_option("--setup", setup, "Standard sensor setup (1-10)")->check(CLI::Range(1, 10));
  exp->add_option("--out", out_dir, "Output directory");
  exp->add_option("--runs", runs_dir, "Directory with trajectory.csv files from run/batch");
  CLI::App* cal = app.add_subcommand("calibrate-thresholds", "Compute controller thresholds from reference scenes");
  cal->add_option("--out", out_dir, "Write thresholds JSON to this file")->default_str("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*cal) {
      const ThresholdCalibration c = calibrate_thresholds();
      const json j{{"plane_peak", c.plane_peak}, {"alignment_peak", c.alignment_peak}, {"T_CA", c.T_CA},
                   {"T_OA", c.T_OA},             {"T_RCF", c.T_RCF},                   {"T_AF_single", c.T_AF_single},
                   {"T_AFF_corr", c.T_AFF_corr}};
      out << j.dump(2) << "\n";
      if (cal->count("--out") && !out_dir.empty()) write_file(out_dir, j.dump(2) + "\n");
      return 0;
    }

    Scenario scenario = load_scenario(scenario_path);
    if (!fast) fast = scenario.sonar.mode == "fast";

    if (*exp) {
      if (setup > 0) scenario = with_setup(scenario, setup);
      export_figures(scenario, out_dir, runs_dir, out);
      return 0;
    }
    if (*serve_cmd) {
      LiveSession session(scenario, fast, fs::path(scenario_path).parent_path(), seed.value_or(0));
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      ServeOptions opts;
      opts.port = port;
      serve(session, opts, g_stop, [&](unsigned short p) {
        out << "serving " << scenario.name << " on ws://0.0.0.0:" << p << "\n" << std::flush;
      });
      return 0;
    }

    const std::uint64_t first_seed = seed.value_or(scenario.seed);
    fs::create_directories(out_dir);
    std::vector<RunGroup> groups;
    if (*run) {
      groups.push_back(run_group(scenario, setup, reps, first_seed, fast, out_dir));
    } else {
      std::vector<int> rows;
      if (setup > 0) rows = {setup};
      else if (!scenario.setups.empty()) rows = scenario.setups;
      else
        for (int r = 1; r <= kStandardSetups; ++r) rows.push_back(r);
      for (int r : rows) groups.push_back(run_group(scenario, r, reps, first_seed, fast, out_dir));
    }
    write_aggregate(groups, scenario, out_dir);
    return summarize(groups, out_dir, out);
  } catch (const ScenarioError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sonarnav
