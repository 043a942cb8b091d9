#pragma once

// Four-layer subsumption controller over masked energyscapes.
// Priority: collision avoidance (CA) > obstacle avoidance (OA) >
// acoustic flow following (AFF) > reactive corridor following (RCF).

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonarnav/energyscape.hpp"
#include "sonarnav/masks.hpp"

namespace sonarnav {

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Layer { CA, OA, AFF, RCF, PASS };

const char* to_string(Layer layer);
Layer layer_from_string(const std::string& name);

struct VelocityCommand {
  double V{0.0};      // m/s
  double omega{0.0};  // rad/s, CCW (left turn) positive
  bool operator==(const VelocityCommand&) const = default;
};

struct ControllerConfig {
  // Energy thresholds; defaults come from `sonarnav calibrate-thresholds`
  // (plane reflector of unit reflectivity at 1 m, full DSP chain).
  double T_CA{0.0880732178688};
  double T_OA{0.0880732178688};
  double T_RCF{0.0440366089344};
  double T_AF_single{0.00554197205935};
  double T_AFF_corr{0.00554197205935};

  double lambda_OA{1.0};
  double mu_OA{1.0};
  double lambda_RCF{1.0};
  double lambda_AFF{1.0};

  double omega_CA{0.5};     // rad/s
  double V_reverse{-0.1};   // m/s
  int ca_consecutive{4};
  double V_max{0.3};        // m/s
  double peak_prominence{0.1};  // fraction of max A(d)
  std::vector<double> d_grid{default_d_grid()};

  /// -2.5..2.5 m in 0.05 m steps without |d| < 0.15 m.
  static std::vector<double> default_d_grid();
  /// Multiples of `step` in [d_min, d_max] with |d| >= exclude_below.
  static std::vector<double> make_d_grid(double d_min, double d_max, double step, double exclude_below);
  /// Throws ConfigurationError on invalid values.
  void validate() const;
};

struct ControllerState {
  int ca_streak{0};
  std::optional<double> d_p;
  bool operator==(const ControllerState&) const = default;
};

/// Non-zero entries of a ternary mask, with per-voxel range terms.
struct CompiledMask {
  std::vector<std::uint32_t> index;
  std::vector<std::int8_t> sign;
  std::vector<float> inv_r2;
  std::vector<std::uint32_t> range_idx;

  CompiledMask() = default;
  CompiledMask(const TernaryMask& mask);  // NOLINT(google-explicit-constructor)
};

struct CompiledFlowLine {
  std::vector<std::uint32_t> index;
  std::vector<float> sqrt_r;

  CompiledFlowLine() = default;
  CompiledFlowLine(const FlowLineMask& line, const Grid& grid);  // NOLINT(google-explicit-constructor)
};

struct LayerRegions {
  std::vector<ControlRegion> ca;
  std::vector<ControlRegion> oa;
  std::vector<ControlRegion> rcf;
};

/// Per-layer, per-sensor masks, built once per configuration and shared read-only.
struct ControllerMasks {
  Grid grid;
  std::size_t n_sensors{0};
  std::vector<TernaryMask> ca, oa, rcf;
  std::vector<CompiledMask> ca_c, oa_c, rcf_c;
  std::vector<double> d_grid;
  std::vector<std::vector<CompiledFlowLine>> aff;  // [d index][sensor]

  static ControllerMasks build(const LayerRegions& regions, std::span<const SensorPose> sensors, const Grid& grid,
                               const std::vector<double>& d_grid);
};

struct AlignmentPeak {
  double d{0.0};
  double value{0.0};
};

struct Diagnostics {
  std::vector<double> masked_sum;  // per sensor, sum of E*|M| for the reporting layer
  double ratio{0.0};               // OA/RCF steering ratio
  std::vector<AlignmentPeak> peaks;
  std::optional<double> d_s, d_l, d_r;
};

struct LayerDecision {
  Layer layer{Layer::PASS};
  bool triggered{false};
  VelocityCommand command;
  Diagnostics diagnostics;
};

LayerDecision ca_layer(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks,
                       const ControllerConfig& cfg, const ControllerState& state);
LayerDecision oa_layer(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks,
                       VelocityCommand cmd_in, const ControllerConfig& cfg);
LayerDecision rcf_layer(std::span<const Energyscape> scapes, std::span<const CompiledMask> masks,
                        VelocityCommand cmd_in, const ControllerConfig& cfg);

struct AlignmentProfile {
  std::vector<double> d;
  std::vector<double> A;
  std::vector<bool> observable;
};

AlignmentProfile aff_alignment(std::span<const Energyscape> scapes,
                               const std::vector<std::vector<CompiledFlowLine>>& flowlines,
                               const std::vector<double>& d_grid);

/// Local maxima of A over its grid with the configured minimum prominence.
std::vector<AlignmentPeak> find_alignment_peaks(const AlignmentProfile& profile, double min_prominence_fraction);

LayerDecision aff_layer(const AlignmentProfile& profile, VelocityCommand cmd_in, const ControllerConfig& cfg,
                        const ControllerState& state);

struct StepResult {
  VelocityCommand cmd_out;
  LayerDecision decision;
  ControllerState state;
};

/// One control cycle. Throws ConfigurationError when the energyscapes do not
/// match the mask grids or sensor count.
StepResult step(std::span<const Energyscape> scapes, const ControllerMasks& masks, VelocityCommand cmd_in,
                const ControllerConfig& cfg, const ControllerState& state);

}  // namespace sonarnav
