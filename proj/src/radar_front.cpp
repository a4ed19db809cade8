#include "mmgesture/radar_front.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace mmg {
namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct LocalOffset {
  double forward = 0.0;  // toward the radar, m
  double lateral = 0.0;  // m
};

// Hand reference displacement at motion progress u (u = 0 at start, 1 at end).
LocalOffset hand_path(const GestureScript& s, double u) {
  const double e = s.extent_scale;
  switch (s.kind) {
    case GestureKind::kPush: return {0.25 * e * u, 0.0};
    case GestureKind::kPull: return {0.25 * e * (1.0 - u), 0.0};
    // Swipes carry a forward reach so the hand keeps a radial velocity while
    // crossing the line of sight; a purely tangential point is Doppler-blind.
    case GestureKind::kLeftSwipe: return {0.2 * e * u, 0.15 * e * (1.0 - 2.0 * u)};
    case GestureKind::kRightSwipe: return {0.2 * e * (1.0 - u), 0.15 * e * (2.0 * u - 1.0)};
    case GestureKind::kClockwise: {
      const double phi = 2.0 * kPi * u;
      return {e * (0.12 + 0.1 * std::sin(phi)), e * 0.1 * std::cos(phi)};
    }
    case GestureKind::kAnticlockwise: {
      const double phi = 2.0 * kPi * (1.0 - u);
      return {e * (0.12 + 0.1 * std::sin(phi)), e * 0.1 * std::cos(phi)};
    }
    case GestureKind::kNegative:
      switch (s.negative_motion) {
        case NegativeMotion::kArmLift: return {0.22 * e * std::sin(kPi * u), 0.05 * e * u};
        case NegativeMotion::kWave:
          return {0.08 * e * std::sin(4.0 * kPi * u), 0.12 * e * std::sin(2.0 * kPi * u)};
        case NegativeMotion::kSitDown: return {-0.15 * e * u, 0.0};
      }
  }
  return {};
}

struct HandPoint {
  double forward;
  double lateral;
  double reflectivity;
};

constexpr HandPoint kHandPoints[] = {
    {0.0, 0.0, 1.0},      // palm
    {0.04, 0.015, 0.6},   // fingers
    {-0.06, -0.01, 0.5},  // wrist
};

struct Vec2 {
  double x = 0.0;  // lateral (positive azimuth side)
  double y = 0.0;  // boresight
};

Vec2 to_world(double anchor_distance, double anchor_angle, double forward, double lateral) {
  const double s = std::sin(anchor_angle);
  const double c = std::cos(anchor_angle);
  // forward unit = -(s, c); lateral unit = (c, -s)
  return {anchor_distance * s - forward * s + lateral * c,
          anchor_distance * c - forward * c - lateral * s};
}

Scatterer moving_point(const Vec2& p, const Vec2& dp, double reflectivity) {
  const double r = std::hypot(p.x, p.y);
  return {r, std::atan2(p.x, p.y), (p.x * dp.x + p.y * dp.y) / r, reflectivity};
}

}  // namespace

double RadarConfig::range_resolution() const {
  const double bandwidth = chirp_slope * samples_per_chirp / sample_rate;
  return signal_speed / (2.0 * bandwidth);
}

double RadarConfig::velocity_resolution() const {
  return wavelength / (2.0 * chirps_per_frame * chirp_interval);
}

double RadarConfig::max_unambiguous_velocity() const {
  return wavelength / (4.0 * chirp_interval);
}

double RadarConfig::angular_resolution(int n_channels, double theta) const {
  return wavelength / (n_channels * element_spacing * std::cos(theta));
}

double RadarConfig::angle_bin_offset(double theta) const {
  return std::sin(theta) * angle_fft_size * element_spacing / wavelength;
}

void RadarConfig::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("radar config: " + what); };
  if (!(wavelength > 0.0)) fail("wavelength must be positive");
  if (!(chirp_slope > 0.0)) fail("chirp_slope must be positive");
  if (!(chirp_interval > 0.0)) fail("chirp_interval must be positive");
  if (!(sample_rate > 0.0)) fail("sample_rate must be positive");
  if (!(signal_speed > 0.0)) fail("signal_speed must be positive");
  if (!(frame_period > 0.0)) fail("frame_period must be positive");
  if (chirps_per_frame < 2 || samples_per_chirp < 2) fail("frame dimensions too small");
  if (rx_channels < 1) fail("rx_channels must be >= 1");
  if (!(element_spacing > 0.0) || element_spacing > wavelength / 2.0 * (1.0 + 1e-12)) {
    fail("element_spacing must lie in (0, wavelength/2]");
  }
  if (kept_range_bins < 1 || kept_range_bins > samples_per_chirp) {
    fail("kept_range_bins must lie in [1, samples_per_chirp]");
  }
  if (angle_fft_size < rx_channels) fail("angle_fft_size must be >= rx_channels");
  if (chirps_per_frame * chirp_interval > frame_period * (1.0 + 1e-9)) {
    fail("chirps do not fit in the frame period");
  }
}

RadarConfig default_config() {
  RadarConfig c;
  c.wavelength = 3.9e-3;
  c.chirps_per_frame = 128;
  c.samples_per_chirp = 128;
  c.sample_rate = 5.0e6;
  c.rx_channels = 8;
  c.element_spacing = c.wavelength / 2.0;
  c.frame_period = 0.05;
  c.kept_range_bins = 32;
  c.angle_fft_size = 32;
  constexpr double kRangeResolution = 0.047;
  constexpr double kVelocityResolution = 0.039;
  c.chirp_slope = c.signal_speed * c.sample_rate /
                  (2.0 * kRangeResolution * c.samples_per_chirp);
  c.chirp_interval = c.wavelength / (2.0 * c.chirps_per_frame * kVelocityResolution);
  return c;
}

void validate_scatterer(const Scatterer& s, const RadarConfig& config) {
  if (!(s.range > 0.0) || s.range > config.max_range() * (1.0 + 1e-12)) {
    throw ValidationError("scatterer range " + std::to_string(s.range) +
                          " m outside the kept range gate");
  }
  if (!(std::abs(s.azimuth) < kPi / 2.0)) throw ValidationError("scatterer azimuth out of field");
  if (!(std::abs(s.radial_velocity) < config.max_unambiguous_velocity())) {
    throw ValidationError("scatterer velocity exceeds the unambiguous limit");
  }
  if (!(s.reflectivity >= 0.0)) throw ValidationError("negative reflectivity");
}

bool AdcCube::matches(const RadarConfig& config) const {
  return chirps == config.chirps_per_frame && samples == config.samples_per_chirp &&
         channels == config.rx_channels &&
         data.size() == static_cast<std::size_t>(chirps) * samples * channels;
}

int GestureScript::frame_count(const RadarConfig& config) const {
  return static_cast<int>(std::lround(duration * config.frame_rate()));
}

int hand_scatterer_count(const GestureScript& script) {
  const bool torso = script.kind == GestureKind::kNegative &&
                     script.negative_motion == NegativeMotion::kSitDown;
  return static_cast<int>(std::size(kHandPoints)) + (torso ? 1 : 0);
}

ScattererSet user_body(double anchor_distance, double anchor_angle, double reflectivity) {
  const Vec2 torso = to_world(anchor_distance, anchor_angle, -0.15, 0.0);
  const Vec2 shoulder = to_world(anchor_distance, anchor_angle, -0.12, 0.18);
  return {moving_point(torso, {}, reflectivity), moving_point(shoulder, {}, reflectivity / 3.0)};
}

std::vector<ScattererSet> gesture_trajectory(const GestureScript& script,
                                             const RadarConfig& config) {
  if (!(script.speed_scale > 0.0)) throw ValidationError("speed_scale must be positive");
  if (!(script.duration > 0.0)) throw ValidationError("duration must be positive");
  if (!(script.extent_scale > 0.0)) throw ValidationError("extent_scale must be positive");
  const int n = script.frame_count(config);
  if (n < 4) throw ValidationError("gesture script shorter than 4 frames");

  const double rate = script.speed_scale / script.duration;  // du/dt while moving
  const bool torso = script.kind == GestureKind::kNegative &&
                     script.negative_motion == NegativeMotion::kSitDown;

  std::vector<ScattererSet> frames;
  frames.reserve(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) {
    const double t = f * config.frame_period;
    const double raw = rate * t;
    const double u = std::min(raw, 1.0);
    const double du_dt = raw < 1.0 ? rate : 0.0;

    constexpr double h = 1e-6;
    const LocalOffset here = hand_path(script, u);
    const LocalOffset ahead = hand_path(script, u + h);
    const LocalOffset behind = hand_path(script, u - h);
    const double fwd_rate = (ahead.forward - behind.forward) / (2.0 * h) * du_dt;
    const double lat_rate = (ahead.lateral - behind.lateral) / (2.0 * h) * du_dt;

    // With a zero anchor distance to_world maps a local rate to a world rate.
    const Vec2 hand_velocity = to_world(0.0, script.anchor_angle, fwd_rate, lat_rate);

    ScattererSet set;
    set.reserve(std::size(kHandPoints) + 1 + script.clutter.size());
    for (const auto& hp : kHandPoints) {
      const Vec2 p = to_world(script.anchor_distance, script.anchor_angle,
                              here.forward + hp.forward, here.lateral + hp.lateral);
      set.push_back(moving_point(p, hand_velocity, hp.reflectivity * script.hand_reflectivity));
    }
    if (torso) {
      // The torso leans back twice as far as the hand retreats.
      const Vec2 p = to_world(script.anchor_distance, script.anchor_angle,
                              -0.15 + 2.0 * here.forward, 0.0);
      const Vec2 dp = to_world(0.0, script.anchor_angle, 2.0 * fwd_rate, 0.0);
      set.push_back(moving_point(p, dp, 1.5 * script.hand_reflectivity));
    }
    for (const auto& c : script.clutter) set.push_back(c);
    for (const auto& s : set) {
      try {
        validate_scatterer(s, config);
      } catch (const ValidationError& e) {
        throw ValidationError(std::string("gesture leaves the valid scene at frame ") +
                              std::to_string(f) + ": " + e.what());
      }
    }
    frames.push_back(std::move(set));
  }
  return frames;
}

std::uint64_t frame_seed(std::uint64_t seed, std::int64_t frame_index) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(frame_index) + 1));
}

AdcCube synthesize_frame(const RadarConfig& config, const ScattererSet& scatterers,
                         double noise_snr_db, std::uint64_t seed) {
  const int L = config.chirps_per_frame;
  const int S = config.samples_per_chirp;
  const int N = config.rx_channels;
  std::vector<Complex> acc(static_cast<std::size_t>(L) * S * N);

  std::vector<Complex> fast(static_cast<std::size_t>(S));
  std::vector<Complex> slow(static_cast<std::size_t>(L));
  std::vector<Complex> space(static_cast<std::size_t>(N));
  double ref_power = 0.0;

  for (const auto& sc : scatterers) {
    ref_power = std::max(ref_power, sc.reflectivity * sc.reflectivity);
    const double beat = 2.0 * config.chirp_slope * sc.range / config.signal_speed;
    const double w_fast = 2.0 * kPi * beat / config.sample_rate;
    const double w_slow = 4.0 * kPi * sc.radial_velocity * config.chirp_interval / config.wavelength;
    const double w_space = 2.0 * kPi * config.element_spacing * std::sin(sc.azimuth) / config.wavelength;
    const Complex amp = std::polar(sc.reflectivity, 4.0 * kPi * sc.range / config.wavelength);
    for (int n = 0; n < S; ++n) fast[n] = std::polar(1.0, w_fast * n);
    for (int m = 0; m < L; ++m) slow[m] = amp * std::polar(1.0, w_slow * m);
    for (int k = 0; k < N; ++k) space[k] = std::polar(1.0, w_space * k);

    auto* out = acc.data();
    for (int m = 0; m < L; ++m) {
      for (int n = 0; n < S; ++n) {
        const Complex ms = slow[m] * fast[n];
        for (int k = 0; k < N; ++k) *out++ += ms * space[k];
      }
    }
  }

  AdcCube cube(L, S, N);
  if (std::isfinite(noise_snr_db) && ref_power > 0.0) {
    const double sigma = std::sqrt(ref_power / std::pow(10.0, noise_snr_db / 10.0) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& v : acc) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v += Complex(re, im);
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) {
    cube.data[i] = std::complex<float>(static_cast<float>(acc[i].real()),
                                       static_cast<float>(acc[i].imag()));
  }
  return cube;
}

}  // namespace mmg
