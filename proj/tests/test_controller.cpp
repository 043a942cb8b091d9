#include <doctest.h>

#include <cmath>
#include <random>

#include "controller_fixtures.hpp"
#include "sonarnav/calibration.hpp"

using namespace sonarnav;
using namespace fixtures;

namespace {

struct Rig {
  ControllerConfig cfg;
  ControllerMasks masks{standard_masks(cfg)};
  Grid grid{Grid::canonical()};

  Energyscape blank() const { return Energyscape(grid, 0, 0.0); }
  StepResult run(const Energyscape& e, VelocityCommand in, const ControllerState& s = {}) const {
    return step(std::span<const Energyscape>(&e, 1), masks, in, cfg, s);
  }
  std::span<const Energyscape> one(const Energyscape& e) const { return {&e, 1}; }
};

const Rig& rig() {
  static const Rig r;
  return r;
}

}  // namespace

TEST_CASE("all-zero energyscapes pass the input through bitwise") {
  const VelocityCommand in{0.123456789, -0.314159};
  const StepResult out = rig().run(rig().blank(), in);
  CHECK(out.decision.layer == Layer::PASS);
  CHECK_FALSE(out.decision.triggered);
  CHECK(out.cmd_out == in);
  CHECK(out.decision.command == in);
}

TEST_CASE("CA turns away from a left reflection and stops") {
  Energyscape e = rig().blank();
  put(e, 0.2, -30.0, 1.0f);
  const LayerDecision d = ca_layer(rig().one(e), rig().masks.ca_c, rig().cfg, {});
  CHECK(d.triggered);
  CHECK(d.command.omega == doctest::Approx(-0.5));
  CHECK(d.command.V == 0.0);
}

TEST_CASE("CA steers by the nearest above-threshold voxel") {
  Energyscape e = rig().blank();
  put(e, 0.25, -30.0, 1.0f);
  put(e, 0.10, 40.0, 1.0f);
  const LayerDecision d = ca_layer(rig().one(e), rig().masks.ca_c, rig().cfg, {});
  CHECK(d.command.omega == doctest::Approx(0.5));
}

TEST_CASE("CA below threshold does not trigger") {
  Energyscape e = rig().blank();
  put(e, 0.2, 10.0, static_cast<float>(rig().cfg.T_CA * 0.99));
  CHECK_FALSE(ca_layer(rig().one(e), rig().masks.ca_c, rig().cfg, {}).triggered);
}

TEST_CASE("CA latch reverses from the fourth consecutive trigger and resets") {
  Energyscape e = rig().blank();
  put(e, 0.2, 20.0, 1.0f);
  ControllerState s;
  for (int k = 1; k <= 6; ++k) {
    const StepResult r = rig().run(e, {0.3, 0.0}, s);
    CHECK(r.decision.layer == Layer::CA);
    CHECK(r.state.ca_streak == k);
    CHECK(r.cmd_out.V == (k >= 4 ? -0.1 : 0.0));
    CHECK(r.cmd_out.omega == doctest::Approx(0.5));
    s = r.state;
  }
  const StepResult clear = rig().run(rig().blank(), {0.3, 0.0}, s);
  CHECK(clear.state.ca_streak == 0);
  const StepResult again = rig().run(e, {0.3, 0.0}, clear.state);
  CHECK(again.cmd_out.V == 0.0);
}

TEST_CASE("OA single right voxel closed form") {
  const ControllerConfig& cfg = rig().cfg;
  Energyscape e = rig().blank();
  const double E = 0.5;
  put(e, 2.0, 3.0, static_cast<float>(E));
  const auto [i, j] = voxel_at(e.grid, 2.0, 3.0);
  const double r = e.grid.range_center(i);
  const VelocityCommand in{0.3, 0.1};
  const LayerDecision d = oa_layer(rig().one(e), rig().masks.oa_c, in, cfg);
  REQUIRE(d.triggered);
  CHECK(d.diagnostics.ratio == doctest::Approx(-1.0 / (r * r)).epsilon(1e-6));
  CHECK(d.command.omega == doctest::Approx(in.omega + cfg.lambda_OA / (r * r)).epsilon(1e-6));
  CHECK(d.command.V == doctest::Approx(in.V * std::clamp(1.0 - cfg.mu_OA * E, 0.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("OA symmetric energy cancels steering but slows down") {
  Energyscape e = rig().blank();
  put(e, 1.5, -5.0, 0.3f);
  put(e, 1.5, 5.0, 0.3f);
  const VelocityCommand in{0.3, 0.2};
  const LayerDecision d = oa_layer(rig().one(e), rig().masks.oa_c, in, rig().cfg);
  REQUIRE(d.triggered);
  CHECK(d.diagnostics.ratio == doctest::Approx(0.0));
  CHECK(d.command.omega == doctest::Approx(in.omega));
  CHECK(d.command.V < in.V);
}

TEST_CASE("OA and RCF inverse-square weighting near versus far") {
  for (int layer = 0; layer < 2; ++layer) {
    Energyscape near = rig().blank(), far = rig().blank();
    put(near, 0.5, -2.0, 0.5f);
    put(far, 4.9, -2.0, 0.5f);
    const auto& m = layer == 0 ? rig().masks.oa_c : rig().masks.rcf_c;
    auto f = layer == 0 ? oa_layer : rcf_layer;
    const double rn = f(rig().one(near), m, {}, rig().cfg).diagnostics.ratio;
    const double rf = f(rig().one(far), m, {}, rig().cfg).diagnostics.ratio;
    const double cn = near.grid.range_center(voxel_at(near.grid, 0.5, 0).first);
    const double cf = far.grid.range_center(voxel_at(far.grid, 4.9, 0).first);
    CHECK(rn / rf == doctest::Approx((cf / cn) * (cf / cn)).epsilon(1e-5));
    CHECK(rn / rf == doctest::Approx(96.04).epsilon(0.02));
  }
}

TEST_CASE("RCF mirrors OA with the speed untouched") {
  const ControllerConfig& cfg = rig().cfg;
  Energyscape e = rig().blank();
  put(e, 1.5, 30.0, 0.1f);
  const auto [i, j] = voxel_at(e.grid, 1.5, 30.0);
  const double r = e.grid.range_center(i);
  const VelocityCommand in{0.25, -0.1};
  const LayerDecision d = rcf_layer(rig().one(e), rig().masks.rcf_c, in, cfg);
  REQUIRE(d.triggered);
  CHECK(d.command.omega == doctest::Approx(in.omega + cfg.lambda_RCF / (r * r)).epsilon(1e-6));
  CHECK(d.command.V == in.V);

  Energyscape sym = rig().blank();
  put(sym, 1.5, 30.0, 0.1f);
  put(sym, 1.5, -30.0, 0.1f);
  const LayerDecision s = rcf_layer(rig().one(sym), rig().masks.rcf_c, in, cfg);
  CHECK(s.command.omega == doctest::Approx(in.omega));
  CHECK(s.command.V == in.V);
  CHECK_FALSE(rcf_layer(rig().one(rig().blank()), rig().masks.rcf_c, in, cfg).triggered);
}

TEST_CASE("OA and RCF steer away from the loaded side, antisymmetrically") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.35, 4.5), ub(1.0, 20.0), ue(0.1, 1.0);
  for (int s = 0; s < 50; ++s) {
    Energyscape right = rig().blank();
    for (int k = 0; k < 5; ++k) put(right, ur(rng), ub(rng), static_cast<float>(ue(rng)));
    const Energyscape left = mirrored(right);
    const VelocityCommand in{0.3, 0.05};
    for (int layer = 0; layer < 2; ++layer) {
      const auto& m = layer == 0 ? rig().masks.oa_c : rig().masks.rcf_c;
      auto f = layer == 0 ? oa_layer : rcf_layer;
      const LayerDecision a = f(rig().one(right), m, in, rig().cfg);
      const LayerDecision b = f(rig().one(left), m, in, rig().cfg);
      if (!a.triggered) continue;
      REQUIRE(b.triggered);
      CHECK(a.command.omega - in.omega > 0.0);
      CHECK(b.command.omega - in.omega < 0.0);
      CHECK(a.command.omega - in.omega == doctest::Approx(-(b.command.omega - in.omega)).epsilon(1e-9));
      CHECK(a.command.V >= 0.0);
      CHECK(a.command.V <= in.V);
    }
  }
}

TEST_CASE("AFF alignment of a synthetic wall") {
  const ControllerConfig& cfg = rig().cfg;
  const AlignmentProfile zero = aff_alignment(rig().one(rig().blank()), rig().masks.aff, cfg.d_grid);
  for (double a : zero.A) CHECK(a == 0.0);

  Energyscape e = rig().blank();
  paint_wall(e, 1.0, 1.0f);
  const AlignmentProfile p = aff_alignment(rig().one(e), rig().masks.aff, cfg.d_grid);
  const FlowLineMask line = flowline_mask(1.0, SensorPose{}, e.grid);
  double expected = 0.0;
  for (const auto& v : line.voxels) expected += std::sqrt(e.grid.range_center(v.range_idx));
  expected /= static_cast<double>(line.length());
  for (std::size_t k = 0; k < p.d.size(); ++k) {
    if (std::abs(p.d[k] - 1.0) < 1e-9)
      CHECK(p.A[k] == doctest::Approx(expected).epsilon(1e-6));
    else
      CHECK(p.A[k] == 0.0);
  }
}

TEST_CASE("AFF square-root range weighting") {
  const Grid g = Grid::canonical();
  const FlowLineMask base = flowline_mask(1.0, SensorPose{}, g);
  FlowLineMask twice;
  twice.d = 2.0;
  for (const auto& v : base.voxels)
    if (2 * v.range_idx + 1 < g.n_range) twice.voxels.push_back({2 * v.range_idx, v.angle_idx});
  FlowLineMask near;
  near.d = 1.0;
  for (const auto& v : twice.voxels) near.voxels.push_back({v.range_idx / 2, v.angle_idx});
  Energyscape e(g, 0, 0.0);
  std::fill(e.energy.begin(), e.energy.end(), 1.0f);
  const std::vector<std::vector<CompiledFlowLine>> lines{{CompiledFlowLine(near, g)}, {CompiledFlowLine(twice, g)}};
  const AlignmentProfile p = aff_alignment(std::span<const Energyscape>(&e, 1), lines, {1.0, 2.0});
  CHECK(p.A[1] / p.A[0] == doctest::Approx(std::sqrt(2.0)).epsilon(5e-3));
}

TEST_CASE("AFF empty flow-lines are unobservable") {
  const Grid g = Grid::canonical();
  Energyscape e(g, 0, 0.0);
  const std::vector<std::vector<CompiledFlowLine>> lines{{CompiledFlowLine(FlowLineMask{}, g)}};
  const AlignmentProfile p = aff_alignment(std::span<const Energyscape>(&e, 1), lines, {0.5});
  CHECK(p.A[0] == 0.0);
  CHECK_FALSE(p.observable[0]);
}

TEST_CASE("AFF single-peak law") {
  const ControllerConfig& cfg = rig().cfg;
  const VelocityCommand in{0.3, 0.07};
  const AlignmentProfile first = profile_with(cfg.d_grid, {{1.0, 1.0}});
  const LayerDecision a = aff_layer(first, in, cfg, {});
  REQUIRE(a.triggered);
  CHECK(a.command == in);
  CHECK(*a.diagnostics.d_s == doctest::Approx(1.0));

  ControllerState s;
  s.d_p = 1.0;
  const LayerDecision b = aff_layer(profile_with(cfg.d_grid, {{1.2, 1.0}}), in, cfg, s);
  REQUIRE(b.triggered);
  CHECK(b.command.omega - in.omega == doctest::Approx(cfg.lambda_AFF * 0.2));
  CHECK(b.command.V == in.V);

  CHECK_FALSE(aff_layer(profile_with(cfg.d_grid, {{1.0, cfg.T_AF_single * 0.5}}), in, cfg, {}).triggered);
}

TEST_CASE("AFF corridor law centres the platform") {
  const ControllerConfig& cfg = rig().cfg;
  const VelocityCommand in{0.3, -0.05};
  const LayerDecision sym = aff_layer(profile_with(cfg.d_grid, {{1.0, 1.0}, {-1.0, 1.0}}), in, cfg, {});
  REQUIRE(sym.triggered);
  CHECK(sym.command.omega == doctest::Approx(in.omega));
  CHECK(*sym.diagnostics.d_l == doctest::Approx(1.0));
  CHECK(*sym.diagnostics.d_r == doctest::Approx(-1.0));

  const LayerDecision off = aff_layer(profile_with(cfg.d_grid, {{0.8, 1.0}, {-1.2, 0.9}}), in, cfg, {});
  CHECK(off.command.omega - in.omega == doctest::Approx(cfg.lambda_AFF * (0.8 - 1.2)));

  // Three qualifying peaks: the largest on each side are used.
  const LayerDecision three =
      aff_layer(profile_with(cfg.d_grid, {{0.8, 1.0}, {2.0, 0.5}, {-1.2, 0.9}}), in, cfg, {});
  CHECK(*three.diagnostics.d_l == doctest::Approx(0.8));
}

TEST_CASE("AFF peak locations are invariant to energy scaling") {
  Energyscape e = rig().blank();
  paint_wall(e, 1.2, 0.3f);
  paint_wall(e, -0.9, 0.2f);
  put(e, 2.0, 10.0, 0.05f);
  const auto& cfg = rig().cfg;
  const AlignmentProfile p = aff_alignment(rig().one(e), rig().masks.aff, cfg.d_grid);
  for (float k : {0.01f, 3.0f, 250.0f}) {
    Energyscape s = e;
    for (float& v : s.energy) v *= k;
    const AlignmentProfile q = aff_alignment(rig().one(s), rig().masks.aff, cfg.d_grid);
    for (std::size_t i = 0; i < p.A.size(); ++i) CHECK(q.A[i] == doctest::Approx(k * p.A[i]).epsilon(1e-5));
    const auto pa = find_alignment_peaks(p, cfg.peak_prominence), qa = find_alignment_peaks(q, cfg.peak_prominence);
    REQUIRE(pa.size() == qa.size());
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i].d == qa[i].d);
  }
}

TEST_CASE("scripted corridor selects the AFF corridor law over RCF") {
  Energyscape e = rig().blank();
  paint_wall(e, 1.0, 0.05f);
  paint_wall(e, -1.0, 0.05f);
  const VelocityCommand in{0.3, 0.0};
  REQUIRE(rcf_layer(rig().one(e), rig().masks.rcf_c, in, rig().cfg).triggered);
  const StepResult r = rig().run(e, in);
  CHECK(r.decision.layer == Layer::AFF);
  CHECK(r.decision.diagnostics.d_l.has_value());
  CHECK(r.decision.diagnostics.d_r.has_value());
  CHECK(r.cmd_out.omega == doctest::Approx(0.0));
  CHECK_FALSE(r.state.d_p.has_value());
}

TEST_CASE("subsumption order under forced multi-trigger inputs") {
  Energyscape all = rig().blank();
  put(all, 0.2, 10.0, 1.0f);   // CA
  put(all, 2.0, 2.0, 1.0f);    // OA
  paint_wall(all, 1.0, 0.05f);  // AFF and RCF
  CHECK(rig().run(all, {0.3, 0}).decision.layer == Layer::CA);
  put(all, 0.2, 10.0, 0.0f);
  CHECK(rig().run(all, {0.3, 0}).decision.layer == Layer::OA);
  put(all, 2.0, 2.0, 0.0f);
  CHECK(rig().run(all, {0.3, 0}).decision.layer == Layer::AFF);

  Energyscape rcf_only = rig().blank();
  put(rcf_only, 1.0, -60.0, 0.06f);
  put(rcf_only, 1.1, -61.0, 0.06f);
  const StepResult r = rig().run(rcf_only, {0.3, 0});
  const AlignmentProfile p = aff_alignment(rig().one(rcf_only), rig().masks.aff, rig().cfg.d_grid);
  REQUIRE_FALSE(aff_layer(p, {0.3, 0}, rig().cfg, {}).triggered);
  CHECK(r.decision.layer == Layer::RCF);
}

TEST_CASE("reported layer is always the highest-priority triggered layer") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ur(0.05, 4.9), ub(-89.0, 89.0), ue(0.0, 0.3);
  ControllerState s;
  for (int trial = 0; trial < 150; ++trial) {
    Energyscape e = rig().blank();
    const int n = static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) put(e, ur(rng), ub(rng), static_cast<float>(ue(rng)));
    if (rng() % 3 == 0) paint_wall(e, 0.5 + 0.05 * static_cast<double>(rng() % 20), 0.02f);
    const VelocityCommand in{0.3 * ue(rng) / 0.3, ue(rng) - 0.15};
    const StepResult r = rig().run(e, in, s);

    const bool ca = ca_layer(rig().one(e), rig().masks.ca_c, rig().cfg, s).triggered;
    const bool oa = oa_layer(rig().one(e), rig().masks.oa_c, in, rig().cfg).triggered;
    const bool aff = aff_layer(aff_alignment(rig().one(e), rig().masks.aff, rig().cfg.d_grid), in, rig().cfg, s).triggered;
    const bool rcf = rcf_layer(rig().one(e), rig().masks.rcf_c, in, rig().cfg).triggered;
    const Layer expected = ca ? Layer::CA : oa ? Layer::OA : aff ? Layer::AFF : rcf ? Layer::RCF : Layer::PASS;
    CHECK(r.decision.layer == expected);
    if (expected == Layer::PASS) CHECK(r.cmd_out == in);
    if (expected == Layer::OA) CHECK((r.cmd_out.V >= 0.0 && r.cmd_out.V <= in.V));
    CHECK(r.state.ca_streak == (ca ? s.ca_streak + 1 : 0));
    if (expected != Layer::AFF) CHECK_FALSE(r.state.d_p.has_value());

    const StepResult again = rig().run(e, in, s);
    CHECK(again.cmd_out == r.cmd_out);
    CHECK(again.state == r.state);
    s = r.state;
  }
}

TEST_CASE("configuration errors") {
  const Rig& R = rig();
  Energyscape wrong(Grid::reduced(), 0, 0.0);
  CHECK_THROWS_AS(R.run(wrong, {}), ConfigurationError);
  std::vector<Energyscape> two{R.blank(), R.blank()};
  CHECK_THROWS_AS(step(two, R.masks, {}, R.cfg, {}), ConfigurationError);
  ControllerConfig other = R.cfg;
  other.d_grid = {1.0};
  const Energyscape e = R.blank();
  CHECK_THROWS_AS(step(std::span<const Energyscape>(&e, 1), R.masks, {}, other, {}), ConfigurationError);

  ControllerConfig bad;
  bad.T_CA = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  bad = {};
  bad.lambda_OA = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
  bad = {};
  bad.ca_consecutive = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("default d grid") {
  const auto g = ControllerConfig::default_d_grid();
  CHECK(g.size() == 2 * (50 - 2));
  CHECK(g.front() == doctest::Approx(-2.5));
  CHECK(g.back() == doctest::Approx(2.5));
  for (double d : g) CHECK(std::abs(d) >= 0.15 - 1e-12);
}

TEST_CASE("layer names round trip") {
  for (Layer l : {Layer::CA, Layer::OA, Layer::AFF, Layer::RCF, Layer::PASS})
    CHECK(layer_from_string(to_string(l)) == l);
  CHECK_THROWS(layer_from_string("XYZ"));
}

TEST_CASE("calibrated thresholds reproduce the shipped defaults") {
  const ThresholdCalibration cal = calibrate_thresholds();
  const ControllerConfig def;
  CHECK(cal.T_CA == doctest::Approx(def.T_CA).epsilon(1e-6));
  CHECK(cal.T_OA == doctest::Approx(def.T_OA).epsilon(1e-6));
  CHECK(cal.T_RCF == doctest::Approx(def.T_RCF).epsilon(1e-6));
  CHECK(cal.T_AF_single == doctest::Approx(def.T_AF_single).epsilon(1e-6));
  CHECK(cal.T_AFF_corr == doctest::Approx(def.T_AFF_corr).epsilon(1e-6));
  CHECK(cal.T_OA == doctest::Approx(cal.plane_peak / 10.0));
  CHECK(cal.T_RCF == doctest::Approx(cal.T_OA / 2.0));
}
