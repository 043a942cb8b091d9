#include "sonarnav/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sonarnav {

const char* to_string(Layer layer) {
  switch (layer) {
    case Layer::CA: return "CA";
    case Layer::OA: return "OA";
    case Layer::AFF: return "AFF";
    case Layer::RCF: return "RCF";
    case Layer::PASS: return "PASS";
  }
  return "PASS";
}

Layer layer_from_string(const std::string& name) {
  for (Layer l : {Layer::CA, Layer::OA, Layer::AFF, Layer::RCF, Layer::PASS})
    if (name == to_string(l)) return l;
  throw std::invalid_argument("unknown layer: " + name);
}

std::vector<double> ControllerConfig::make_d_grid(double d_min, double d_max, double step, double exclude_below) {
  if (!(step > 0.0) || !std::isfinite(d_min) || !std::isfinite(d_max) || d_max < d_min)
    throw ConfigurationError("controller: invalid d grid specification");
  std::vector<double> d;
  const auto k0 = static_cast<long>(std::ceil(d_min / step - 1e-9));
  const auto k1 = static_cast<long>(std::floor(d_max / step + 1e-9));
  for (long k = k0; k <= k1; ++k) {
    const double v = static_cast<double>(k) * step;
    if (std::abs(v) >= exclude_below - 1e-12 && v != 0.0) d.push_back(v);
  }
  return d;
}

std::vector<double> ControllerConfig::default_d_grid() { return make_d_grid(-2.5, 2.5, 0.05, 0.15); }

void ControllerConfig::validate() const {
  auto pos = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) throw ConfigurationError(std::string("controller: ") + name + " must be > 0");
  };
  auto nonneg = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigurationError(std::string("controller: ") + name + " must be >= 0");
  };
  pos(T_CA, "T_CA");
  pos(T_OA, "T_OA");
  pos(T_RCF, "T_RCF");
  pos(T_AF_single, "T_AF_single");
  pos(T_AFF_corr, "T_AFF_corr");
  nonneg(lambda_OA, "lambda_OA");
  nonneg(mu_OA, "mu_OA");
  nonneg(lambda_RCF, "lambda_RCF");
  nonneg(lambda_AFF, "lambda_AFF");
  nonneg(omega_CA, "omega_CA");
  pos(V_max, "V_max");
  if (!std::isfinite(V_reverse) || std::abs(V_reverse) > V_max)
    throw ConfigurationError("controller: |V_reverse| must not exceed V_max");
  if (ca_consecutive < 1) throw ConfigurationError("controller: ca_consecutive must be >= 1");
  if (!std::isfinite(peak_prominence) || peak_prominence < 0.0 || peak_prominence >= 1.0)
    throw ConfigurationError("controller: peak_prominence must be in [0, 1)");
  if (d_grid.empty()) throw ConfigurationError("controller: d_grid is empty");
  for (std::size_t k = 0; k < d_grid.size(); ++k) {
    if (!std::isfinite(d_grid[k]) || d_grid[k] == 0.0) throw ConfigurationError("controller: d_grid values must be finite and non-zero");
    if (k > 0 && d_grid[k] <= d_grid[k - 1]) throw ConfigurationError("controller: d_grid must be strictly increasing");
  }
}

CompiledMask::CompiledMask(const TernaryMask& mask) {
  const Grid& g = mask.grid;
  for (std::size_t i = 0; i < g.n_range; ++i) {
    const double r = g.range_center(i);
    for (std::size_t j = 0; j < g.n_angle; ++j) {
      const std::int8_t v = mask.at(i, j);
      if (v == 0) continue;
      index.push_back(static_cast<std::uint32_t>(g.index(i, j)));
      sign.push_back(v);
      inv_r2.push_back(static_cast<float>(1.0 / (r * r)));
      range_idx.push_back(static_cast<std::uint32_t>(i));
    }
  }
}

CompiledFlowLine::CompiledFlowLine(const FlowLineMask& line, const Grid& grid) {
  for (const Voxel& v : line.voxels) {
    index.push_back(static_cast<std::uint32_t>(grid.index(v.range_idx, v.angle_idx)));
    sqrt_r.push_back(static_cast<float>(std::sqrt(grid.range_center(v.range_idx))));
  }
}

ControllerMasks ControllerMasks::build(const LayerRegions& regions, std::span<const SensorPose> sensors,
                                       const Grid& grid, const std::vector<double>& d_grid) {
  ControllerMasks m;
  m.grid = grid;
  m.n_sensors = sensors.size();
  m.d_grid = d_grid;
  for (std::size_t j = 0; j < sensors.size(); ++j) {
    const int idx = static_cast<int>(j);
    m.ca.push_back(region_to_mask(regions.ca, sensors[j], grid, "CA", idx));
    m.oa.push_back(region_to_mask(regions.oa, sensors[j], grid, "OA", idx));
    m.rcf.push_back(region_to_mask(regions.rcf, sensors[j], grid, "RCF", idx));
    m.ca_c.emplace_back(m.ca.back());
    m.oa_c.emplace_back(m.oa.back());
    m.rcf_c.emplace_back(m.rcf.back());
  }
  m.aff.resize(d_grid.size());
  for (std::size_t k = 0; k < d_grid.size(); ++k) {
    for (const SensorPose& pose : sensors) {
      if (std::abs(d_grid[k]) > grid.r_max() + pose.l()) {
        m.aff[k].emplace_back();
        continue;
      }
      m.aff[k].emplace_back(flowline_mask(d_grid[k], pose, grid), grid);
    }
  }
  return m;
}

namespace {

struct MaskedSums {
  std::vector<double> per_sensor;  // sum E*|M|
  double abs_sum{0.0};
  double signed_weighted{0.0};     // sum E*M/r^2
  bool above{false};
};

MaskedSums masked_sums(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks, double threshold) {
  MaskedSums s;
  s.per_sensor.assign(scapes.size(), 0.0);
  for (std::size_t j = 0; j < scapes.size() && j < masks.size(); ++j) {
    const auto& e = scapes[j].energy;
    const CompiledMask& m = masks[j];
    double sum = 0.0;
    for (std::size_t k = 0; k < m.index.size(); ++k) {
      const double v = e[m.index[k]];
      if (v <= 0.0) continue;
      sum += v;
      s.signed_weighted += v * m.sign[k] * m.inv_r2[k];
      if (v > threshold) s.above = true;
    }
    s.per_sensor[j] = sum;
    s.abs_sum += sum;
  }
  return s;
}

LayerDecision not_triggered(Layer layer, VelocityCommand cmd_in) {
  LayerDecision d;
  d.layer = layer;
  d.command = cmd_in;
  return d;
}

}  // namespace

LayerDecision ca_layer(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks,
                       const ControllerConfig& cfg, const ControllerState& state) {
  LayerDecision d = not_triggered(Layer::CA, {});
  d.diagnostics.masked_sum.assign(scapes.size(), 0.0);
  std::uint32_t best_range = std::numeric_limits<std::uint32_t>::max();
  float best_energy = 0.0f;
  int best_sign = 0;
  for (std::size_t j = 0; j < scapes.size() && j < masks.size(); ++j) {
    const auto& e = scapes[j].energy;
    const CompiledMask& m = masks[j];
    for (std::size_t k = 0; k < m.index.size(); ++k) {
      const float v = e[m.index[k]];
      if (v > 0.0f) d.diagnostics.masked_sum[j] += v;
      if (!(v > cfg.T_CA)) continue;
      if (m.range_idx[k] < best_range || (m.range_idx[k] == best_range && v > best_energy)) {
        best_range = m.range_idx[k];
        best_energy = v;
        best_sign = m.sign[k];
      }
    }
  }
  if (best_sign == 0) return d;
  d.triggered = true;
  d.command.omega = best_sign > 0 ? -cfg.omega_CA : cfg.omega_CA;
  d.command.V = state.ca_streak + 1 >= cfg.ca_consecutive ? cfg.V_reverse : 0.0;
  return d;
}

LayerDecision oa_layer(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks,
                       VelocityCommand cmd_in, const ControllerConfig& cfg) {
  const MaskedSums s = masked_sums(scapes, masks, cfg.T_OA);
  LayerDecision d = not_triggered(Layer::OA, cmd_in);
  d.diagnostics.masked_sum = s.per_sensor;
  if (!s.above) return d;
  d.triggered = true;
  d.diagnostics.ratio = s.signed_weighted / s.abs_sum;
  d.command.omega = cmd_in.omega - cfg.lambda_OA * d.diagnostics.ratio;
  d.command.V = cmd_in.V * std::clamp(1.0 - cfg.mu_OA * s.abs_sum, 0.0, 1.0);
  return d;
}

LayerDecision rcf_layer(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks,
                        VelocityCommand cmd_in, const ControllerConfig& cfg) {
  const MaskedSums s = masked_sums(scapes, masks, cfg.T_RCF);
  LayerDecision d = not_triggered(Layer::RCF, cmd_in);
  d.diagnostics.masked_sum = s.per_sensor;
  if (!s.above) return d;
  d.triggered = true;
  d.diagnostics.ratio = s.signed_weighted / s.abs_sum;
  d.command.omega = cmd_in.omega - cfg.lambda_RCF * d.diagnostics.ratio;
  return d;
}

AlignmentProfile aff_alignment(std::span<const Energyscape> scapes,
                               const std::vector<std::vector<CompiledFlowLine>>& flowlines,
                               const std::vector<double>& d_grid) {
  AlignmentProfile p;
  p.d = d_grid;
  p.A.assign(d_grid.size(), 0.0);
  p.observable.assign(d_grid.size(), false);
  for (std::size_t k = 0; k < d_grid.size() && k < flowlines.size(); ++k) {
    double a = 0.0;
    for (std::size_t j = 0; j < scapes.size() && j < flowlines[k].size(); ++j) {
      const CompiledFlowLine& f = flowlines[k][j];
      if (f.index.empty()) continue;
      p.observable[k] = true;
      const auto& e = scapes[j].energy;
      double g = 0.0;
      for (std::size_t v = 0; v < f.index.size(); ++v) g += e[f.index[v]] * f.sqrt_r[v];
      a += g / static_cast<double>(f.index.size());
    }
    p.A[k] = a;
  }
  return p;
}

std::vector<AlignmentPeak> find_alignment_peaks(const AlignmentProfile& profile, double min_prominence_fraction) {
  const auto& A = profile.A;
  const auto& d = profile.d;
  const std::size_t n = A.size();
  std::vector<AlignmentPeak> peaks;
  if (n < 3) return peaks;
  const double a_max = *std::max_element(A.begin(), A.end());
  if (!(a_max > 0.0)) return peaks;

  // Neighbours across a gap wider than the typical spacing (the excluded band
  // around d = 0) are treated as boundaries.
  std::vector<double> steps;
  for (std::size_t k = 1; k < n; ++k) steps.push_back(d[k] - d[k - 1]);
  std::vector<double> sorted = steps;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double typical = sorted[sorted.size() / 2];
  auto linked = [&](std::size_t k) { return steps[k - 1] <= 1.5 * typical; };  // k-1 -> k

  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!linked(k) || !linked(k + 1)) continue;
    if (!(A[k] > A[k - 1] && A[k] > A[k + 1])) continue;
    double left_min = A[k];
    for (std::size_t m = k; m-- > 0;) {
      if (A[m] > A[k]) break;
      left_min = std::min(left_min, A[m]);
    }
    double right_min = A[k];
    for (std::size_t m = k + 1; m < n; ++m) {
      if (A[m] > A[k]) break;
      right_min = std::min(right_min, A[m]);
    }
    const double prominence = A[k] - std::max(left_min, right_min);
    if (prominence >= min_prominence_fraction * a_max) peaks.push_back({d[k], A[k]});
  }
  return peaks;
}

LayerDecision aff_layer(const AlignmentProfile& profile, VelocityCommand cmd_in, const ControllerConfig& cfg,
                        const ControllerState& state) {
  LayerDecision dec = not_triggered(Layer::AFF, cmd_in);
  dec.diagnostics.peaks = find_alignment_peaks(profile, cfg.peak_prominence);
  const auto& peaks = dec.diagnostics.peaks;

  const AlignmentPeak* left = nullptr;
  const AlignmentPeak* right = nullptr;
  for (const auto& p : peaks) {
    if (!(p.value > cfg.T_AFF_corr)) continue;
    if (p.d > 0.0 && (!left || p.value > left->value)) left = &p;
    if (p.d < 0.0 && (!right || p.value > right->value)) right = &p;
  }
  if (left && right) {
    dec.triggered = true;
    dec.diagnostics.d_l = left->d;
    dec.diagnostics.d_r = right->d;
    dec.command.omega = cmd_in.omega + cfg.lambda_AFF * (left->d - std::abs(right->d));
    return dec;
  }

  const AlignmentPeak* single = nullptr;
  for (const auto& p : peaks)
    if (p.value > cfg.T_AF_single && (!single || p.value > single->value)) single = &p;
  if (!single) return dec;
  dec.triggered = true;
  dec.diagnostics.d_s = single->d;
  const bool same_side = state.d_p && ((*state.d_p > 0.0) == (single->d > 0.0));
  if (same_side) dec.command.omega = cmd_in.omega + cfg.lambda_AFF * (single->d - *state.d_p);
  return dec;
}

StepResult step(std::span<const Energyscape> scapes, const ControllerMasks& masks, VelocityCommand cmd_in,
                const ControllerConfig& cfg, const ControllerState& state) {
  if (scapes.size() != masks.n_sensors)
    throw ConfigurationError("controller: expected " + std::to_string(masks.n_sensors) + " energyscapes, got " +
                             std::to_string(scapes.size()));
  for (const Energyscape& e : scapes)
    if (!(e.grid == masks.grid) || e.energy.size() != masks.grid.size())
      throw ConfigurationError("controller: energyscape grid does not match the mask grid");
  if (masks.aff.size() != cfg.d_grid.size())
    throw ConfigurationError("controller: flow-line masks were built for a different d grid");

  StepResult out;
  out.state = state;

  LayerDecision ca = ca_layer(scapes, masks.ca_c, cfg, state);
  if (ca.triggered) {
    out.state.ca_streak = state.ca_streak + 1;
    out.state.d_p.reset();
    out.cmd_out = ca.command;
    out.decision = std::move(ca);
    return out;
  }
  out.state.ca_streak = 0;

  LayerDecision oa = oa_layer(scapes, masks.oa_c, cmd_in, cfg);
  if (oa.triggered) {
    out.state.d_p.reset();
    out.cmd_out = oa.command;
    out.decision = std::move(oa);
    return out;
  }

  const AlignmentProfile profile = aff_alignment(scapes, masks.aff, masks.d_grid);
  LayerDecision aff = aff_layer(profile, cmd_in, cfg, state);
  if (aff.triggered) {
    out.state.d_p = aff.diagnostics.d_s;  // empty for the corridor law
    out.cmd_out = aff.command;
    out.decision = std::move(aff);
    return out;
  }
  out.state.d_p.reset();

  LayerDecision rcf = rcf_layer(scapes, masks.rcf_c, cmd_in, cfg);
  if (rcf.triggered) {
    rcf.diagnostics.peaks = std::move(aff.diagnostics.peaks);
    out.cmd_out = rcf.command;
    out.decision = std::move(rcf);
    return out;
  }

  out.cmd_out = cmd_in;
  out.decision = not_triggered(Layer::PASS, cmd_in);
  out.decision.diagnostics.peaks = std::move(aff.diagnostics.peaks);
  return out;
}

}  // namespace sonarnav
