#pragma once

#include "sonarnav/controller.hpp"
#include "sonarnav/sonar_sim.hpp"

namespace sonarnav {

struct ThresholdCalibration {
  double plane_peak{0.0};      // full-pipeline energy peak of a unit plane at 1 m
  double alignment_peak{0.0};  // max A(d) for the same reflector on the d = 0.5 m flow-line
  double T_CA{0.0};
  double T_OA{0.0};
  double T_RCF{0.0};
  double T_AF_single{0.0};
  double T_AFF_corr{0.0};
};

/// Reference scenes for a centered forward sensor: a unit-reflectivity plane
/// at 1 m dead ahead (sets T_OA = peak / 10, T_CA = T_OA, T_RCF = T_OA / 2) and
/// the same echo at 1 m, bearing -30 degrees (sets T_AF = 0.3 * max A).
ThresholdCalibration calibrate_thresholds(const SonarConfig& config = {});

/// Copies the calibrated thresholds into `cfg`.
void apply_calibration(ControllerConfig& cfg, const ThresholdCalibration& cal);

}  // namespace sonarnav
