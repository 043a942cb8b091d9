#pragma once

// Simulated imaging sonar: geometric echo tracing, a time-domain DSP chain
// (echo synthesis, matched filter, delay-and-sum beamforming, envelope) and a
// fast point-spread surrogate, plus field-of-view dead zones.

#include <cstdint>
#include <span>
#include <vector>

#include "sonarnav/energyscape.hpp"
#include "sonarnav/flow_model.hpp"
#include "sonarnav/world.hpp"

namespace sonarnav {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

enum class ReflectorKind { plane, corner, edge };

const char* to_string(ReflectorKind kind);

struct ReflectionEvent {
  double range{0.0};        // m, from the sensor center
  double bearing_deg{0.0};  // sensor image convention, positive to the right
  double amplitude{1.0};    // surface reflectivity before kind factor and spreading
  ReflectorKind kind{ReflectorKind::plane};
};

/// Relative echo strength per reflector kind.
struct ReflectorFactors {
  double plane{1.0};
  double corner{0.6};
  double edge{0.3};

  double operator()(ReflectorKind k) const;
};

/// Echo strength after kind factor and 1/range^2 spreading.
double echo_strength(const ReflectionEvent& e, const ReflectorFactors& factors);

/// Linear FM sweep emitted by the sensor.
struct Chirp {
  double f_start{80e3};
  double f_end{20e3};
  double duration{2.5e-3};
  double sample_rate{450e3};

  /// Throws std::invalid_argument when the sweep is not representable.
  void validate() const;
  std::size_t length() const;
  /// Continuous-time waveform; valid for any t (callers gate the support).
  double value_at(double t) const;
  std::vector<double> samples() const;
};

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};
};

/// Microphone array on the sensor face (the sensor-frame y-z plane).
struct ArrayGeometry {
  std::vector<Vec3> mic_positions;
  Vec3 emitter_position;
  std::uint64_t seed{42};

  /// Seeded uniform-random layout with a minimum spacing constraint.
  static ArrayGeometry generate(std::uint64_t seed = 42, std::size_t n_mics = 32, double width = 0.116,
                                double height = 0.05, double min_spacing = 0.004);
  /// All microphones at the emitter position; test helper.
  static ArrayGeometry collapsed(std::size_t n_mics = 32);
};

/// Sensor center and boresight in the world frame (heading is CCW from world x).
struct SensorWorldPose {
  Vec2 position;
  double heading{0.0};
};

SensorWorldPose sensor_world_pose(const Pose2& robot, const SensorPose& pose);

/// Bearing (radians, sensor image convention) of a world point seen from a sensor.
double bearing_of(const SensorWorldPose& sensor, Vec2 p);

/// Specular plane, corner and edge echoes visible from the sensor, sorted by range.
std::vector<ReflectionEvent> trace_reflections(const EnvironmentModel& world, const SensorWorldPose& sensor,
                                               double r_max);

/// Channel-major block of equally sampled time series.
struct Signals {
  std::size_t n_channels{0};
  std::size_t n_samples{0};
  double sample_rate{0.0};
  std::vector<double> data;

  Signals() = default;
  Signals(std::size_t channels, std::size_t samples, double fs)
      : n_channels(channels), n_samples(samples), sample_rate(fs), data(channels * samples, 0.0) {}

  std::span<double> channel(std::size_t c) { return {data.data() + c * n_samples, n_samples}; }
  std::span<const double> channel(std::size_t c) const { return {data.data() + c * n_samples, n_samples}; }
};

struct EchoOptions {
  double r_max{5.0};
  double speed_of_sound{kSpeedOfSound};
  ReflectorFactors factors;
  double noise_std{0.0};  // additive white noise, 0 disables
  std::uint64_t noise_seed{0};
};

/// Samples needed to hold every echo out to r_max.
std::size_t record_length(const Chirp& chirp, double r_max, double speed_of_sound = kSpeedOfSound);

/// Each event contributes a delayed, scaled chirp to every microphone channel.
/// The onset sample of an echo with delay tau is round(tau * fs).
Signals synthesize_echo_signals(std::span<const ReflectionEvent> events, const Chirp& chirp,
                                const ArrayGeometry& array, const EchoOptions& options = {});

/// Cross-correlation of every channel with the chirp; lag 0 at index 0, length preserved.
Signals matched_filter(const Signals& signals, const Chirp& chirp);

struct BeamformOptions {
  double speed_of_sound{kSpeedOfSound};
  // Frequency band processed; signals are assumed band-limited to it.
  double f_low{0.0};
  double f_high{0.0};  // 0 selects Nyquist
};

/// Far-field delay-and-sum over the grid's bearing columns (one output channel per column).
Signals beamform(const Signals& signals, const ArrayGeometry& array, const Grid& grid,
                 const BeamformOptions& options = {});

/// Analytic-signal magnitude per bearing, max-decimated onto range bins via
/// range = c t / 2 and divided by `normalization`.
Energyscape envelope(const Signals& per_angle, const Grid& grid, double normalization, int sensor_index = 0,
                     double timestamp = 0.0, double speed_of_sound = kSpeedOfSound);

struct SonarConfig {
  Grid grid{Grid::canonical()};
  Chirp chirp;
  ArrayGeometry array{ArrayGeometry::generate()};
  double speed_of_sound{kSpeedOfSound};
  ReflectorFactors factors;
  double noise_std{0.0};
  double psf_sigma_angle_deg{3.0};
  double psf_sigma_range_bins{2.0};
};

/// Full chain: synthesis, matched filter, beamforming, envelope. Energies are
/// normalized so that an isolated echo of strength 1 peaks near 1.
Energyscape full_energyscape(std::span<const ReflectionEvent> events, const SonarConfig& config,
                             int sensor_index = 0, double timestamp = 0.0, std::uint64_t noise_seed = 0);

struct PsfModel {
  double sigma_angle_deg{3.0};
  double sigma_range_bins{2.0};
};

/// Splats each event's strength with a separable Gaussian kernel.
Energyscape fast_energyscape(std::span<const ReflectionEvent> events, const Grid& grid, const PsfModel& psf = {},
                             const ReflectorFactors& factors = {}, int sensor_index = 0, double timestamp = 0.0);

/// Rectangle in the platform frame; depth runs along the local x-axis.
struct DeadZone {
  double width{0.12};
  double depth{0.05};
  Vec2 center;
  double yaw{0.0};  // CCW

  std::vector<Vec2> corners() const;
};

/// First zeroed range bin per bearing column (n_range when the column is clear).
struct DeadZoneShadow {
  std::vector<std::size_t> first_zeroed_bin;

  void apply(Energyscape& e) const;
};

DeadZoneShadow compute_shadow(std::span<const DeadZone> occluders, const SensorPose& sensor, const Grid& grid);

Energyscape apply_dead_zones(Energyscape e, std::span<const DeadZone> occluders, const SensorPose& sensor);

/// Sensor body rectangle (width across the face, depth behind it).
DeadZone sensor_body(const SensorPose& pose, double width = 0.12, double depth = 0.05);

/// For every sensor, the bodies of all other sensors.
std::vector<std::vector<DeadZone>> mutual_occlusion(std::span<const SensorPose> sensors, double width = 0.12,
                                                    double depth = 0.05);

}  // namespace sonarnav
