#include "sonarnav/sonar_sim.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>

#include "fft.hpp"

namespace sonarnav {

const char* to_string(ReflectorKind kind) {
  switch (kind) {
    case ReflectorKind::plane: return "plane";
    case ReflectorKind::corner: return "corner";
    case ReflectorKind::edge: return "edge";
  }
  return "plane";
}

double ReflectorFactors::operator()(ReflectorKind k) const {
  switch (k) {
    case ReflectorKind::plane: return plane;
    case ReflectorKind::corner: return corner;
    case ReflectorKind::edge: return edge;
  }
  return plane;
}

double echo_strength(const ReflectionEvent& e, const ReflectorFactors& factors) {
  return factors(e.kind) * e.amplitude / (e.range * e.range);
}

// ---------------------------------------------------------------------------
// Chirp

void Chirp::validate() const {
  const double nyquist = sample_rate / 2.0;
  if (!(sample_rate > 0.0)) throw std::invalid_argument("chirp: sample_rate must be > 0");
  if (!(f_start > 0.0 && f_start < nyquist)) throw std::invalid_argument("chirp: f_start outside (0, fs/2)");
  if (!(f_end > 0.0 && f_end < nyquist)) throw std::invalid_argument("chirp: f_end outside (0, fs/2)");
  if (!(duration > 0.0)) throw std::invalid_argument("chirp: duration must be > 0");
}

std::size_t Chirp::length() const { return static_cast<std::size_t>(std::llround(duration * sample_rate)); }

double Chirp::value_at(double t) const {
  const double sweep = (f_end - f_start) / duration;
  return std::cos(2.0 * kPi * (f_start * t + 0.5 * sweep * t * t));
}

std::vector<double> Chirp::samples() const {
  std::vector<double> s(length());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = value_at(static_cast<double>(k) / sample_rate);
  return s;
}

// ---------------------------------------------------------------------------
// Array

namespace {

// Portable uniform double in [0, 1) from a 64-bit engine.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - unit_uniform(rng);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double distance3(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

}  // namespace

ArrayGeometry ArrayGeometry::generate(std::uint64_t seed, std::size_t n_mics, double width, double height,
                                      double min_spacing) {
  ArrayGeometry g;
  g.seed = seed;
  std::mt19937_64 rng(seed);
  constexpr int kMaxAttempts = 200000;
  int attempts = 0;
  while (g.mic_positions.size() < n_mics) {
    if (++attempts > kMaxAttempts) throw std::runtime_error("ArrayGeometry: cannot satisfy minimum spacing");
    const Vec3 candidate{0.0, (unit_uniform(rng) - 0.5) * width, (unit_uniform(rng) - 0.5) * height};
    const bool clear = std::all_of(g.mic_positions.begin(), g.mic_positions.end(),
                                   [&](const Vec3& m) { return distance3(m, candidate) >= min_spacing; });
    if (clear) g.mic_positions.push_back(candidate);
  }
  return g;
}

ArrayGeometry ArrayGeometry::collapsed(std::size_t n_mics) {
  ArrayGeometry g;
  g.mic_positions.assign(n_mics, Vec3{});
  g.seed = 0;
  return g;
}

// ---------------------------------------------------------------------------
// Geometry tracing

SensorWorldPose sensor_world_pose(const Pose2& robot, const SensorPose& pose) {
  return {robot.position() + rotate(sensor_origin(pose), robot.yaw), wrap_angle(robot.yaw + sensor_heading(pose))};
}

double bearing_of(const SensorWorldPose& sensor, Vec2 p) {
  const Vec2 d = p - sensor.position;
  return wrap_angle(sensor.heading - std::atan2(d.y, d.x));
}

namespace {

struct Candidate {
  Vec2 point;
  ReflectorKind kind;
  double amplitude;
  std::vector<int> segs;  // segments the reflecting point lies on
  int circle{-1};
};

constexpr double kVertexTol = 1e-9;
constexpr double kOcclusionTol = 1e-9;

// Distance along the unit ray from `origin` to a segment, or +inf.
double ray_segment(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b) {
  const Vec2 e = b - a;
  const double denom = cross(dir, e);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  const Vec2 w = a - origin;
  const double t = cross(w, e) / denom;
  const double u = cross(w, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::numeric_limits<double>::infinity();
  return t;
}

double ray_circle(Vec2 origin, Vec2 dir, Vec2 c, double radius) {
  const Vec2 oc = origin - c;
  const double b = dot(oc, dir);
  const double q = dot(oc, oc) - radius * radius;
  if (q <= 0.0) return 0.0;  // origin inside
  const double disc = b * b - q;
  if (disc < 0.0) return std::numeric_limits<double>::infinity();
  const double t = -b - std::sqrt(disc);
  return t >= 0.0 ? t : std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<ReflectionEvent> trace_reflections(const EnvironmentModel& world, const SensorWorldPose& sensor,
                                               double r_max) {
  const Vec2 s = sensor.position;
  const auto circles = world.circle_snapshot();
  const auto& segs = world.segments;

  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Vec2 ab = segs[i].b - segs[i].a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) continue;
    const double t = dot(s - segs[i].a, ab) / len2;
    if (t >= 0.0 && t <= 1.0)
      candidates.push_back({segs[i].a + ab * t, ReflectorKind::plane, segs[i].reflectivity, {static_cast<int>(i)}});
  }

  struct Vertex {
    Vec2 p;
    std::vector<int> segs;
    double reflectivity;
  };
  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (Vec2 p : {segs[i].a, segs[i].b}) {
      auto it = std::find_if(vertices.begin(), vertices.end(),
                             [&](const Vertex& v) { return norm(v.p - p) <= kVertexTol; });
      if (it == vertices.end()) {
        vertices.push_back({p, {static_cast<int>(i)}, segs[i].reflectivity});
      } else if (std::find(it->segs.begin(), it->segs.end(), static_cast<int>(i)) == it->segs.end()) {
        it->segs.push_back(static_cast<int>(i));
        it->reflectivity = std::max(it->reflectivity, segs[i].reflectivity);
      }
    }
  }
  for (const auto& v : vertices)
    candidates.push_back({v.p, v.segs.size() >= 2 ? ReflectorKind::corner : ReflectorKind::edge, v.reflectivity, v.segs});

  for (std::size_t i = 0; i < circles.size(); ++i) {
    const Vec2 d = s - circles[i].center;
    const double dist = norm(d);
    if (dist <= circles[i].radius) continue;
    candidates.push_back({circles[i].center + d * (circles[i].radius / dist), ReflectorKind::plane,
                          circles[i].reflectivity, {}, static_cast<int>(i)});
  }

  constexpr double kHalfFov = kPi / 2.0;
  constexpr double kFovTol = 1e-9;
  std::vector<ReflectionEvent> events;
  for (const auto& c : candidates) {
    const Vec2 d = c.point - s;
    const double range = norm(d);
    if (!(range > 0.0) || range > r_max) continue;
    double bearing = bearing_of(sensor, c.point);
    if (std::abs(bearing) > kHalfFov + kFovTol) continue;
    bearing = std::clamp(bearing, -kHalfFov, kHalfFov);

    auto owns_segment = [&](int idx) { return std::find(c.segs.begin(), c.segs.end(), idx) != c.segs.end(); };
    const Vec2 dir = d * (1.0 / range);
    bool occluded = false;
    for (std::size_t i = 0; i < segs.size() && !occluded; ++i) {
      if (owns_segment(static_cast<int>(i))) continue;
      occluded = ray_segment(s, dir, segs[i].a, segs[i].b) < range - kOcclusionTol;
    }
    for (std::size_t i = 0; i < circles.size() && !occluded; ++i) {
      if (static_cast<int>(i) == c.circle) continue;
      occluded = ray_circle(s, dir, circles[i].center, circles[i].radius) < range - kOcclusionTol;
    }
    if (occluded) continue;
    events.push_back({range, rad2deg(bearing), c.amplitude, c.kind});
  }
  std::sort(events.begin(), events.end(), [](const ReflectionEvent& a, const ReflectionEvent& b) {
    if (a.range != b.range) return a.range < b.range;
    if (a.bearing_deg != b.bearing_deg) return a.bearing_deg < b.bearing_deg;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  return events;
}

// ---------------------------------------------------------------------------
// Time-domain chain

std::size_t record_length(const Chirp& chirp, double r_max, double speed_of_sound) {
  return static_cast<std::size_t>(std::ceil(2.0 * r_max / speed_of_sound * chirp.sample_rate)) + chirp.length() + 1;
}

Signals synthesize_echo_signals(std::span<const ReflectionEvent> events, const Chirp& chirp,
                                const ArrayGeometry& array, const EchoOptions& options) {
  chirp.validate();
  const double fs = chirp.sample_rate;
  const std::size_t n_samples = record_length(chirp, options.r_max, options.speed_of_sound);
  const std::size_t n_ch = array.mic_positions.size();
  const std::size_t len = chirp.length();
  Signals out(n_ch, n_samples, fs);

  for (const auto& e : events) {
    if (!(e.range > 0.0) || e.range > options.r_max) continue;
    const double strength = echo_strength(e, options.factors);
    const double th = deg2rad(e.bearing_deg);
    const Vec3 p{e.range * std::cos(th), -e.range * std::sin(th), 0.0};
    const double outbound = distance3(p, array.emitter_position);
    for (std::size_t m = 0; m < n_ch; ++m) {
      const double tau = (outbound + distance3(p, array.mic_positions[m])) / options.speed_of_sound;
      const auto onset = static_cast<std::size_t>(std::llround(tau * fs));
      auto ch = out.channel(m);
      for (std::size_t k = 0; k < len && onset + k < n_samples; ++k) {
        const double t = static_cast<double>(onset + k) / fs - tau;
        ch[onset + k] += strength * chirp.value_at(t);
      }
    }
  }

  if (options.noise_std > 0.0) {
    std::mt19937_64 rng(options.noise_seed);
    for (double& v : out.data) v += options.noise_std * gaussian(rng);
  }
  return out;
}

Signals matched_filter(const Signals& signals, const Chirp& chirp) {
  const auto reference = chirp.samples();
  const std::size_t n = fft::next_pow2(signals.n_samples + reference.size());
  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> ref_spec(n / 2 + 1), spec(n / 2 + 1);

  std::copy(reference.begin(), reference.end(), buf.begin());
  fft::forward_real(buf, ref_spec);

  Signals out(signals.n_channels, signals.n_samples, signals.sample_rate);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < signals.n_channels; ++c) {
    std::fill(buf.begin(), buf.end(), 0.0);
    auto in = signals.channel(c);
    std::copy(in.begin(), in.end(), buf.begin());
    fft::forward_real(buf, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= std::conj(ref_spec[k]) * scale;
    fft::inverse_real(spec, buf);
    auto dst = out.channel(c);
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(signals.n_samples), dst.begin());
  }
  return out;
}

Signals beamform(const Signals& signals, const ArrayGeometry& array, const Grid& grid,
                 const BeamformOptions& options) {
  if (signals.n_channels != array.mic_positions.size())
    throw std::invalid_argument("beamform: channel count does not match the array");
  const double fs = signals.sample_rate;
  double max_offset = 0.0;
  for (const auto& m : array.mic_positions) max_offset = std::max(max_offset, std::hypot(m.x, m.y));
  const auto pad = static_cast<std::size_t>(std::ceil(max_offset / options.speed_of_sound * fs)) + 8;
  const std::size_t n = fft::next_pow2(signals.n_samples + 2 * pad);
  const std::size_t n_bins = n / 2 + 1;
  const double df = fs / static_cast<double>(n);
  const double f_high = options.f_high > 0.0 ? std::min(options.f_high, fs / 2.0) : fs / 2.0;
  const auto k_lo = static_cast<std::size_t>(std::ceil(std::max(0.0, options.f_low) / df));
  const auto k_hi = std::min(n_bins - 1, static_cast<std::size_t>(std::floor(f_high / df)));

  std::vector<std::vector<std::complex<double>>> spectra(signals.n_channels,
                                                         std::vector<std::complex<double>>(n_bins));
  std::vector<double> buf(n, 0.0);
  for (std::size_t c = 0; c < signals.n_channels; ++c) {
    std::fill(buf.begin(), buf.end(), 0.0);
    auto in = signals.channel(c);
    std::copy(in.begin(), in.end(), buf.begin());
    fft::forward_real(buf, spectra[c]);
  }

  Signals out(grid.n_angle, signals.n_samples, fs);
  std::vector<std::complex<double>> acc(n_bins);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < grid.n_angle; ++a) {
    const double th = grid.angle_rad(a);
    const double ux = std::cos(th), uy = -std::sin(th);
    std::fill(acc.begin(), acc.end(), std::complex<double>{});
    for (std::size_t m = 0; m < signals.n_channels; ++m) {
      const auto& mic = array.mic_positions[m];
      // Delaying by tau aligns a plane wave from bearing th with the array origin.
      const double tau = (ux * mic.x + uy * mic.y) / options.speed_of_sound;
      const std::complex<double> step = std::polar(1.0, -2.0 * kPi * df * tau);
      std::complex<double> w = std::polar(1.0, -2.0 * kPi * df * static_cast<double>(k_lo) * tau);
      const auto& x = spectra[m];
      for (std::size_t k = k_lo; k <= k_hi; ++k) {
        acc[k] += x[k] * w;
        w *= step;
      }
    }
    for (auto& v : acc) v *= scale;
    fft::inverse_real(acc, buf);
    auto dst = out.channel(a);
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(signals.n_samples), dst.begin());
  }
  return out;
}

Energyscape envelope(const Signals& per_angle, const Grid& grid, double normalization, int sensor_index,
                     double timestamp, double speed_of_sound) {
  if (per_angle.n_channels != grid.n_angle) throw std::invalid_argument("envelope: one channel per bearing expected");
  if (!(normalization > 0.0)) throw std::invalid_argument("envelope: normalization must be > 0");
  Energyscape e(grid, sensor_index, timestamp);
  const std::size_t n = fft::next_pow2(per_angle.n_samples);
  const double fs = per_angle.sample_rate;

  std::vector<std::ptrdiff_t> bin_of(per_angle.n_samples, -1);
  for (std::size_t i = 0; i < per_angle.n_samples; ++i) {
    const double range = speed_of_sound * static_cast<double>(i) / (2.0 * fs);
    const auto b = static_cast<std::size_t>(std::floor(range / grid.range_bin));
    if (b < grid.n_range) bin_of[i] = static_cast<std::ptrdiff_t>(b);
  }

  std::vector<double> buf(n, 0.0);
  std::vector<std::complex<double>> spec(n / 2 + 1), analytic(n);
  const double scale = 1.0 / (static_cast<double>(n) * normalization);
  for (std::size_t a = 0; a < grid.n_angle; ++a) {
    std::fill(buf.begin(), buf.end(), 0.0);
    auto in = per_angle.channel(a);
    std::copy(in.begin(), in.end(), buf.begin());
    fft::forward_real(buf, spec);
    std::fill(analytic.begin(), analytic.end(), std::complex<double>{});
    analytic[0] = spec[0];
    for (std::size_t k = 1; k < n / 2; ++k) analytic[k] = 2.0 * spec[k];
    analytic[n / 2] = spec[n / 2];
    fft::inverse_complex(analytic);
    for (std::size_t i = 0; i < per_angle.n_samples; ++i) {
      if (bin_of[i] < 0) continue;
      const auto value = static_cast<float>(std::abs(analytic[i]) * scale);
      float& cell = e.at(static_cast<std::size_t>(bin_of[i]), a);
      cell = std::max(cell, value);
    }
  }
  return e;
}

Energyscape full_energyscape(std::span<const ReflectionEvent> events, const SonarConfig& config, int sensor_index,
                             double timestamp, std::uint64_t noise_seed) {
  EchoOptions echo;
  echo.r_max = config.grid.r_max();
  echo.speed_of_sound = config.speed_of_sound;
  echo.factors = config.factors;
  echo.noise_std = config.noise_std;
  echo.noise_seed = noise_seed;
  const Signals raw = synthesize_echo_signals(events, config.chirp, config.array, echo);
  const Signals compressed = matched_filter(raw, config.chirp);

  BeamformOptions bf;
  bf.speed_of_sound = config.speed_of_sound;
  bf.f_low = 0.75 * std::min(config.chirp.f_start, config.chirp.f_end);
  bf.f_high = 1.25 * std::max(config.chirp.f_start, config.chirp.f_end);
  const Signals beams = beamform(compressed, config.array, config.grid, bf);

  double chirp_energy = 0.0;
  for (double v : config.chirp.samples()) chirp_energy += v * v;
  const double normalization = chirp_energy * static_cast<double>(config.array.mic_positions.size());
  return envelope(beams, config.grid, normalization, sensor_index, timestamp, config.speed_of_sound);
}

Energyscape fast_energyscape(std::span<const ReflectionEvent> events, const Grid& grid, const PsfModel& psf,
                             const ReflectorFactors& factors, int sensor_index, double timestamp) {
  Energyscape e(grid, sensor_index, timestamp);
  const double sa = psf.sigma_angle_deg;
  const double sr = psf.sigma_range_bins;
  const double span_angle = 4.0 * sa;
  const double span_range = 4.0 * sr;
  std::vector<double> wa(grid.n_angle), wr(grid.n_range);
  for (const auto& ev : events) {
    if (!(ev.range > 0.0) || ev.range > grid.r_max()) continue;
    const double strength = echo_strength(ev, factors);
    const double rb = ev.range / grid.range_bin - 0.5;  // fractional bin index of the echo
    const auto i_lo = static_cast<std::ptrdiff_t>(std::floor(rb - span_range));
    const auto i_hi = static_cast<std::ptrdiff_t>(std::ceil(rb + span_range));
    const double ja = (ev.bearing_deg - grid.angle_min_deg) / grid.angle_step_deg;
    const auto j_lo = static_cast<std::ptrdiff_t>(std::floor(ja - span_angle / grid.angle_step_deg));
    const auto j_hi = static_cast<std::ptrdiff_t>(std::ceil(ja + span_angle / grid.angle_step_deg));
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, j_lo);
         j <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.n_angle) - 1, j_hi); ++j) {
      const double da = grid.angle_deg(static_cast<std::size_t>(j)) - ev.bearing_deg;
      wa[static_cast<std::size_t>(j)] = std::exp(-da * da / (2.0 * sa * sa));
    }
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, i_lo);
         i <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.n_range) - 1, i_hi); ++i) {
      const double dr = static_cast<double>(i) - rb;
      wr[static_cast<std::size_t>(i)] = std::exp(-dr * dr / (2.0 * sr * sr));
    }
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, i_lo);
         i <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.n_range) - 1, i_hi); ++i)
      for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, j_lo);
           j <= std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(grid.n_angle) - 1, j_hi); ++j)
        e.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +=
            static_cast<float>(strength * wr[static_cast<std::size_t>(i)] * wa[static_cast<std::size_t>(j)]);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Dead zones

std::vector<Vec2> DeadZone::corners() const {
  const double hx = depth / 2.0, hy = width / 2.0;
  std::vector<Vec2> out;
  for (Vec2 local : {Vec2{hx, hy}, Vec2{-hx, hy}, Vec2{-hx, -hy}, Vec2{hx, -hy}})
    out.push_back(center + rotate(local, yaw));
  return out;
}

void DeadZoneShadow::apply(Energyscape& e) const {
  if (first_zeroed_bin.size() != e.grid.n_angle) throw std::invalid_argument("dead zone shadow: grid mismatch");
  for (std::size_t j = 0; j < e.grid.n_angle; ++j)
    for (std::size_t i = first_zeroed_bin[j]; i < e.grid.n_range; ++i) e.at(i, j) = 0.0f;
}

DeadZoneShadow compute_shadow(std::span<const DeadZone> occluders, const SensorPose& sensor, const Grid& grid) {
  DeadZoneShadow shadow;
  shadow.first_zeroed_bin.assign(grid.n_angle, grid.n_range);
  const Vec2 origin = sensor_origin(sensor);
  for (const auto& dz : occluders) {
    if (!(dz.width > 0.0) || !(dz.depth > 0.0)) throw std::invalid_argument("dead zone: width and depth must be > 0");
    const Vec2 local = rotate(origin - dz.center, -dz.yaw);
    // An occluder overlapping the sensor's own center is ignored.
    if (std::abs(local.x) <= dz.depth / 2.0 && std::abs(local.y) <= dz.width / 2.0) continue;

    const auto corners = dz.corners();
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < corners.size(); ++k)
      nearest = std::min(nearest, distance_to_segment(origin, corners[k], corners[(k + 1) % corners.size()]));
    const double ref = platform_to_sensor(corners[0], sensor).theta;
    double lo = 0.0, hi = 0.0;
    for (const auto& c : corners) {
      const double d = wrap_angle(platform_to_sensor(c, sensor).theta - ref);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    lo += ref;
    hi += ref;
    const double half_step = deg2rad(grid.angle_step_deg) / 2.0;
    const auto first_bin = static_cast<std::size_t>(std::max(0.0, std::ceil(nearest / grid.range_bin - 0.5)));
    for (std::size_t j = 0; j < grid.n_angle; ++j) {
      const double th = grid.angle_rad(j);
      bool hit = false;
      for (double shift : {-2.0 * kPi, 0.0, 2.0 * kPi})
        hit = hit || (th + half_step >= lo + shift && th - half_step <= hi + shift);
      if (hit) shadow.first_zeroed_bin[j] = std::min(shadow.first_zeroed_bin[j], std::min(first_bin, grid.n_range));
    }
  }
  return shadow;
}

Energyscape apply_dead_zones(Energyscape e, std::span<const DeadZone> occluders, const SensorPose& sensor) {
  compute_shadow(occluders, sensor, e.grid).apply(e);
  return e;
}

DeadZone sensor_body(const SensorPose& pose, double width, double depth) {
  const double heading = sensor_heading(pose);
  const Vec2 back{std::cos(heading), std::sin(heading)};
  return {width, depth, sensor_origin(pose) - back * (depth / 2.0), heading};
}

std::vector<std::vector<DeadZone>> mutual_occlusion(std::span<const SensorPose> sensors, double width, double depth) {
  std::vector<std::vector<DeadZone>> out(sensors.size());
  for (std::size_t j = 0; j < sensors.size(); ++j)
    for (std::size_t k = 0; k < sensors.size(); ++k)
      if (k != j) out[j].push_back(sensor_body(sensors[k], width, depth));
  return out;
}

}  // namespace sonarnav
