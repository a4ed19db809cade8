#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mmgesture/common.hpp"

namespace mmg {

/// Waveform and array constants of an FMCW radar, plus the two processing
/// sizes (kept range bins, angle transform length) that fix the DRAI grid.
struct RadarConfig {
  double wavelength = 3.9e-3;           // m
  double chirp_slope = 0.0;             // Hz/s
  double chirp_interval = 0.0;          // s, start-to-start between chirps
  int chirps_per_frame = 128;
  int samples_per_chirp = 128;
  double sample_rate = 5.0e6;           // Hz, complex baseband
  int rx_channels = 8;                  // virtual array elements
  double element_spacing = 0.0;         // m
  double frame_period = 0.05;           // s
  int kept_range_bins = 32;
  int angle_fft_size = 32;
  double signal_speed = 299792458.0;    // m/s

  double range_resolution() const;
  double velocity_resolution() const;
  double max_unambiguous_velocity() const;
  double frame_rate() const { return 1.0 / frame_period; }
  /// Largest range covered by the kept range bins.
  double max_range() const { return kept_range_bins * range_resolution(); }

  /// Angular resolution lambda / (N l cos(theta)) in radians for an
  /// n-element aperture at azimuth theta.
  double angular_resolution(int n_channels, double theta) const;

  /// Centered angle-bin coordinate (0 at broadside) of azimuth theta.
  double angle_bin_offset(double theta) const;

  /// Throws ValidationError on a non-physical configuration.
  void validate() const;
};

/// Configuration reproducing the reference device: 20 fps, 0.047 m range
/// resolution, 0.039 m/s velocity resolution, 128x128 frames, 8 virtual
/// channels at half-wavelength spacing. The chirp slope is back-solved from
/// the range resolution.
RadarConfig default_config();

struct Scatterer {
  double range = 0.0;            // m
  double azimuth = 0.0;          // rad
  double radial_velocity = 0.0;  // m/s, positive = receding
  double reflectivity = 1.0;     // linear amplitude
};

using ScattererSet = std::vector<Scatterer>;

void validate_scatterer(const Scatterer& s, const RadarConfig& config);

/// One frame of complex baseband samples, layout [chirp][sample][channel].
struct AdcCube {
  int chirps = 0;
  int samples = 0;
  int channels = 0;
  std::vector<std::complex<float>> data;
  std::int64_t frame_index = 0;

  AdcCube() = default;
  AdcCube(int l, int s, int n)
      : chirps(l), samples(s), channels(n),
        data(static_cast<std::size_t>(l) * s * n) {}

  std::complex<float>& at(int chirp, int sample, int channel) {
    return data[(static_cast<std::size_t>(chirp) * samples + sample) * channels + channel];
  }
  std::complex<float> at(int chirp, int sample, int channel) const {
    return data[(static_cast<std::size_t>(chirp) * samples + sample) * channels + channel];
  }
  bool matches(const RadarConfig& config) const;
};

/// Negative-class motions drawn from the non-gesture list.
enum class NegativeMotion : std::uint8_t { kArmLift = 0, kWave = 1, kSitDown = 2 };
inline constexpr int kNumNegativeMotions = 3;

/// Scripted hand motion. Gesture geometry is expressed in a user-local
/// frame: "forward" points from the anchor toward the radar and "lateral"
/// is perpendicular to it.
struct GestureScript {
  GestureKind kind = GestureKind::kPush;
  double anchor_distance = 0.8;  // m, hand start range
  double anchor_angle = 0.0;     // rad
  double speed_scale = 1.0;
  double duration = 1.0;         // s
  ScattererSet clutter;          // static scatterers present in every frame
  double noise_snr_db = std::numeric_limits<double>::infinity();
  double extent_scale = 1.0;     // per-user gesture size
  double hand_reflectivity = 1.0;
  NegativeMotion negative_motion = NegativeMotion::kArmLift;

  int frame_count(const RadarConfig& config) const;
};

/// One scatterer set per frame. Hand scatterers come first (three per hand,
/// plus a moving torso point for the sit-down negative), clutter last.
std::vector<ScattererSet> gesture_trajectory(const GestureScript& script,
                                             const RadarConfig& config);

/// Number of leading hand scatterers in each set produced by
/// gesture_trajectory for this script.
int hand_scatterer_count(const GestureScript& script);

/// Static torso (and shoulder) scatterers of a user standing behind a hand
/// anchored at (distance, angle).
ScattererSet user_body(double anchor_distance, double anchor_angle, double reflectivity = 3.0);

/// Superposition of one complex tone per scatterer plus circular white
/// Gaussian noise. The noise power is referred to the strongest scatterer's
/// per-sample power; an infinite SNR disables noise.
AdcCube synthesize_frame(const RadarConfig& config, const ScattererSet& scatterers,
                         double noise_snr_db, std::uint64_t seed);

/// Seed for frame `frame_index` of a sequence synthesized with `seed`.
std::uint64_t frame_seed(std::uint64_t seed, std::int64_t frame_index);

}  // namespace mmg
