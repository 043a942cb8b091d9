// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "controller_fixtures.hpp"
#include "oracles/flow_oracle.hpp"
#include "oracles/mask_oracle.hpp"
#include "sonarnav/cli.hpp"
#include "sonarnav/flow_model.hpp"
#include "sonarnav/masks.hpp"
#include "sonarnav/scenario.hpp"
#include "sonarnav/sim.hpp"
#include "sonarnav/sonar_sim.hpp"

using namespace sonarnav;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict ac1_flow_constant() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ul(0.0, 0.2), ua(-kPi, kPi), ur(0.5, 4.5), ut(-1.4, 1.4), uv(0.05, 0.3);
  double worst = 0.0;
  std::size_t points = 0;
  for (int s = 0; s < 200; ++s) {
    const SensorPose pose(ul(rng), ua(rng), ua(rng));
    const PolarPoint start{ur(rng), ut(rng)};
    const double V = (s % 2 ? 1.0 : -1.0) * uv(rng);
    const double c0 = linear_flow_constant(start, pose);
    const FlowLine line = integrate_flow_line(start, pose, {V, 0.0}, 1e-3, 3000);
    for (const auto& p : line.points) {
      worst = std::max(worst, std::abs(linear_flow_constant(p, pose) - c0) / std::abs(c0));
      ++points;
    }
  }
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "200 lines, %zu points, max relative drift %.2e, %.2f s", points, worst, t);
  return {worst < 1e-6 && t < 5.0, buf};
}

Verdict ac2_velocity_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> ul(0.0, 0.2), ua(-kPi, kPi), ur(0.1, 5.0), ut(-kPi / 2, kPi / 2),
      uv(-0.3, 0.3), uw(-2.0, 2.0);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const double l = ul(rng), al = ua(rng), be = ua(rng), V = uv(rng), w = uw(rng), r = ur(rng), th = ut(rng);
    const FlowRate f = velocity_field({r, th}, SensorPose(l, al, be), {V, w});
    const auto [dr, dth] = oracle::polar_rates(r, th, l, al, be, V, w);
    worst = std::max({worst, std::abs(f.dr_dt - dr), std::abs(f.dtheta_dt - dth)});
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "1000 samples, max abs error %.2e", worst);
  return {worst < 1e-5, buf};
}

Verdict ac3_centered_rotation() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> ur(0.2, 4.8), ut(-1.5, 1.5), uw(-2.0, 2.0);
  double r_err = 0.0, th_err = 0.0;
  const double dt = 1e-3;
  for (int s = 0; s < 100; ++s) {
    const PolarPoint start{ur(rng), ut(rng)};
    const double w = uw(rng);
    const FlowLine line = integrate_flow_line(start, SensorPose{}, {0.0, w}, dt, 2000);
    for (std::size_t k = 0; k < line.points.size(); ++k) {
      r_err = std::max(r_err, std::abs(line.points[k].r - start.r));
      th_err = std::max(th_err, std::abs(line.points[k].theta - (start.theta + w * dt * static_cast<double>(k))));
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max |dr| %.2e, max bearing deviation from omega*dt*k %.2e", r_err, th_err);
  return {r_err <= 1e-9 && th_err <= 1e-12, buf};
}

Verdict ac4_localization() {
  const auto t0 = Clock::now();
  const SonarConfig cfg;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> ur(0.5, 4.5), ub(-80.0, 80.0);
  double worst_b = 0.0, worst_r = 0.0;
  int ok = 0;
  for (int s = 0; s < 100; ++s) {
    const double r = ur(rng), b = ub(rng);
    const std::vector<ReflectionEvent> ev{{r, b, 1.0, ReflectorKind::plane}};
    const auto pk = full_energyscape(ev, cfg).argmax();
    const double db = std::abs(cfg.grid.angle_deg(pk.angle_idx) - b);
    const double dr = std::abs(cfg.grid.range_center(pk.range_idx) - r);
    worst_b = std::max(worst_b, db);
    worst_r = std::max(worst_r, dr);
    ok += db <= 2.0 && dr <= 0.05;
  }
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/100 localized, worst |dbearing| %.2f deg, worst |drange| %.3f m, %.1f s", ok,
                worst_b, worst_r, t);
  return {ok == 100 && t < 60.0, buf};
}

Verdict ac5_masks() {
  const Grid g = Grid::reduced();
  std::mt19937_64 rng(505);
  std::size_t mismatches = 0;
  for (int kind = 0; kind < 6; ++kind)
    for (int s = 0; s < 20; ++s) {
      const ControlRegion region = oracle::random_region(kind, rng);
      mismatches += oracle::mask_mismatches(region, oracle::random_pose(rng), g);
    }
  std::size_t violations = 0;
  for (int s = 0; s < 500; ++s) {
    const TernaryMask m =
        region_to_mask(oracle::random_region(static_cast<int>(rng() % 6), rng), oracle::random_pose(rng), g);
    const auto [left, right] = split_lr(m);
    for (std::size_t k = 0; k < m.values.size(); ++k) {
      const int v = m.values[k];
      violations += !(v == -1 || v == 0 || v == 1);
      violations += left.values[k] + right.values[k] != std::abs(v);
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "120 region/pose pairs, %zu oracle mismatches; 500 samples, %zu property violations",
                mismatches, violations);
  return {mismatches == 0 && violations == 0, buf};
}

Verdict ac6_controller() {
  using namespace fixtures;
  const ControllerConfig cfg;
  const ControllerMasks masks = standard_masks(cfg);
  const Grid g = masks.grid;
  auto run = [&](const Energyscape& e, VelocityCommand in, const ControllerState& s) {
    return step(std::span<const Energyscape>(&e, 1), masks, in, cfg, s);
  };
  std::vector<std::string> failed;

  // CA sign and latch.
  {
    Energyscape e(g, 0, 0.0);
    put(e, 0.2, -30.0, 1.0f);
    ControllerState s;
    bool ok = true;
    for (int k = 1; k <= 5; ++k) {
      const StepResult r = run(e, {0.3, 0.0}, s);
      ok = ok && r.decision.layer == Layer::CA && std::abs(r.cmd_out.omega + 0.5) < 1e-12;
      ok = ok && r.cmd_out.V == (k >= 4 ? -0.1 : 0.0);
      s = r.state;
    }
    ok = ok && run(Energyscape(g, 0, 0.0), {0.3, 0.0}, s).state.ca_streak == 0;
    if (!ok) failed.push_back("CA");
  }
  // OA inverse-square weighting.
  double ratio = 0.0;
  {
    Energyscape near(g, 0, 0.0), far(g, 0, 0.0);
    put(near, 0.5, 2.0, 0.5f);
    put(far, 4.9, 2.0, 0.5f);
    const double rn = oa_layer(std::span<const Energyscape>(&near, 1), masks.oa_c, {}, cfg).diagnostics.ratio;
    const double rf = oa_layer(std::span<const Energyscape>(&far, 1), masks.oa_c, {}, cfg).diagnostics.ratio;
    ratio = rn / rf;
    const double cn = g.range_center(voxel_at(g, 0.5, 0.0).first), cf = g.range_center(voxel_at(g, 4.9, 0.0).first);
    const double closed_form = (cf / cn) * (cf / cn);
    if (std::abs(ratio - closed_form) > 1e-5 * closed_form || std::abs(ratio - 96.04) > 0.02 * 96.04 || rn >= 0.0)
      failed.push_back("OA");
  }
  // AFF corridor balance.
  {
    Energyscape e(g, 0, 0.0);
    paint_wall(e, 1.0, 0.05f);
    paint_wall(e, -1.0, 0.05f);
    const StepResult r = run(e, {0.3, 0.1}, {});
    const bool rcf_alone = rcf_layer(std::span<const Energyscape>(&e, 1), masks.rcf_c, {0.3, 0.1}, cfg).triggered;
    if (!(r.decision.layer == Layer::AFF && r.decision.diagnostics.d_l && r.decision.diagnostics.d_r &&
          std::abs(r.cmd_out.omega - 0.1) < 1e-12 && rcf_alone))
      failed.push_back("AFF");
  }
  // Subsumption under forced multi-trigger inputs.
  {
    Energyscape e(g, 0, 0.0);
    put(e, 0.2, 10.0, 1.0f);
    put(e, 2.0, 2.0, 1.0f);
    paint_wall(e, 1.0, 0.05f);
    bool ok = run(e, {0.3, 0}, {}).decision.layer == Layer::CA;
    put(e, 0.2, 10.0, 0.0f);
    ok = ok && run(e, {0.3, 0}, {}).decision.layer == Layer::OA;
    put(e, 2.0, 2.0, 0.0f);
    ok = ok && run(e, {0.3, 0}, {}).decision.layer == Layer::AFF;
    Energyscape rcf(g, 0, 0.0);
    put(rcf, 1.0, -60.0, 0.06f);
    put(rcf, 1.1, -61.0, 0.06f);
    ok = ok && run(rcf, {0.3, 0}, {}).decision.layer == Layer::RCF;
    const VelocityCommand in{0.17, -0.03};
    ok = ok && run(Energyscape(g, 0, 0.0), in, {}).cmd_out == in;
    if (!ok) failed.push_back("subsumption");
  }
  std::string detail = "CA latch, OA ratio " + std::to_string(ratio) + ":1 (voxel centres 0.505/4.905 m), AFF corridor balance, subsumption";
  if (!failed.empty()) {
    detail += "; failed:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

Verdict ac7_campaign() {
  const auto t0 = Clock::now();
  const Scenario base = load_scenario(SONARNAV_SCENARIO_DIR "/corridor_junction.json");
  int success = 0, collisions = 0, stuck = 0, goals = 0, runs = 0;
  for (int setup : {1, 4, 8}) {
    const Scenario s = with_setup(base, setup);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const RunReport r = run_scenario(s, seed, true, "setup" + std::to_string(setup));
      ++runs;
      success += r.success();
      collisions += !r.collisions.empty();
      stuck += !r.stuck_intervals.empty();
      goals += r.goal_reached;
    }
  }
  const double t = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d/%d runs clean (collisions %d, stuck %d, goals %d), %.1f s", success, runs,
                collisions, stuck, goals, t);
  return {success == 15 && t < 15 * 60.0, buf};
}

Verdict ac8_realtime() {
  const Scenario s = with_setup(load_scenario(SONARNAV_SCENARIO_DIR "/corridor_junction.json"), 2);
  const auto poses = s.sensor_poses();
  const Grid grid = Grid::canonical();
  const ControllerMasks masks = ControllerMasks::build(s.layer_regions(), poses, grid, s.controller.d_grid);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> ux(0.5, 9.5), uy(-0.8, 0.8), uyaw(-0.6, 0.6);
  ControllerState state;
  double sum = 0.0, worst = 0.0;
  std::vector<Energyscape> scapes(poses.size());
  for (int k = 0; k < 1000; ++k) {
    const Pose2 robot{ux(rng), uy(rng), uyaw(rng)};
    for (std::size_t j = 0; j < poses.size(); ++j) {
      const auto ev = trace_reflections(s.world, sensor_world_pose(robot, poses[j]), grid.r_max());
      scapes[j] = fast_energyscape(ev, grid, {}, {}, static_cast<int>(j), 0.1 * k);
    }
    const auto t0 = Clock::now();
    const StepResult r = step(scapes, masks, {0.3, 0.0}, s.controller, state);
    const double ms = 1e3 * seconds_since(t0);
    state = r.state;
    sum += ms;
    worst = std::max(worst, ms);
  }
  const double mean = sum / 1000.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "3 sensors, 500x181, 1000 steps: mean %.3f ms, max %.3f ms", mean, worst);
  return {mean < 40.0 && worst < 50.0, buf};
}

Verdict ac9_determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "sonarnav_acceptance_ac9";
  fs::remove_all(root);
  std::string csv[2];
  for (int k = 0; k < 2; ++k) {
    const std::string out = (root / std::to_string(k)).string();
    const std::string scenario = SONARNAV_SCENARIO_DIR "/corridor_junction.json";
    const char* argv[] = {"sonarnav", "run", "--scenario", scenario.c_str(), "--setup", "8", "--seed", "3",
                          "--out", out.c_str(), "--fast-sonar"};
    std::ostringstream o, e;
    cli_main(static_cast<int>(std::size(argv)), argv, o, e);
    std::ifstream in(root / std::to_string(k) / "setup8_seed3" / "trajectory.csv", std::ios::binary);
    csv[k].assign(std::istreambuf_iterator<char>(in), {});
  }
  const bool same = !csv[0].empty() && csv[0] == csv[1];
  return {same, "two runs, setup 8, seed 3: " + std::to_string(csv[0].size()) + " bytes, " +
                    (same ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"AC-1 flow-constant conservation", ac1_flow_constant},
      {"AC-2 velocity-field oracle", ac2_velocity_oracle},
      {"AC-3 centered-rotation closed form", ac3_centered_rotation},
      {"AC-4 sonar localization", ac4_localization},
      {"AC-5 mask oracle equivalence", ac5_masks},
      {"AC-6 controller laws", ac6_controller},
      {"AC-7 zero-collision campaign", ac7_campaign},
      {"AC-8 real-time budget", ac8_realtime},
      {"AC-9 determinism", ac9_determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict o{false, ""};
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
