#include "sonarnav/calibration.hpp"

#include <algorithm>

namespace sonarnav {

ThresholdCalibration calibrate_thresholds(const SonarConfig& config) {
  ThresholdCalibration c;
  const SensorPose centered;

  const ReflectionEvent ahead{1.0, 0.0, 1.0, ReflectorKind::plane};
  const Energyscape e1 = full_energyscape(std::span(&ahead, 1), config);
  c.plane_peak = e1.argmax().value;
  c.T_OA = c.plane_peak / 10.0;
  c.T_CA = c.T_OA;
  c.T_RCF = 0.5 * c.T_OA;

  // Platform y = -r sin(theta) = 0.5 m.
  const ReflectionEvent side{1.0, -30.0, 1.0, ReflectorKind::plane};
  const Energyscape e2 = full_energyscape(std::span(&side, 1), config);
  const std::vector<double> d_grid = ControllerConfig::default_d_grid();
  std::vector<std::vector<CompiledFlowLine>> lines(d_grid.size());
  for (std::size_t k = 0; k < d_grid.size(); ++k)
    lines[k].emplace_back(flowline_mask(d_grid[k], centered, config.grid), config.grid);
  const AlignmentProfile a = aff_alignment(std::span(&e2, 1), lines, d_grid);
  c.alignment_peak = *std::max_element(a.A.begin(), a.A.end());
  c.T_AF_single = 0.3 * c.alignment_peak;
  c.T_AFF_corr = c.T_AF_single;
  return c;
}

void apply_calibration(ControllerConfig& cfg, const ThresholdCalibration& cal) {
  cfg.T_CA = cal.T_CA;
  cfg.T_OA = cal.T_OA;
  cfg.T_RCF = cal.T_RCF;
  cfg.T_AF_single = cal.T_AF_single;
  cfg.T_AFF_corr = cal.T_AFF_corr;
}

}  // namespace sonarnav
