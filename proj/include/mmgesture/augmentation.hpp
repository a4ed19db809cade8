#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "mmgesture/common.hpp"
#include "mmgesture/drai_pipeline.hpp"

namespace mmg {

/// Per-frame hand position: the coordinates of the strongest pixel. x is the
/// angle-bin coordinate and y the range-bin coordinate, both 1-based.
struct TrajectoryPoint {
  double x = 0.0;
  double y = 0.0;
};

struct TrajectoryProfile {
  std::vector<TrajectoryPoint> points;
  std::size_t size() const { return points.size(); }
};

enum class ResampleMode : std::uint8_t { kInsert, kRemove };

/// Distributions used by augment_batch. Uniform ranges are inclusive; integer
/// quantities (shifts, intervals) are drawn uniformly over the integers in
/// range.
struct AugmentPolicy {
  // Translation. By default the first pair acts on the range axis and the
  // second on the angle axis; swap_translation_axes flips that binding.
  int delta_x_min = -6;
  int delta_x_max = 6;
  int delta_y_min = -20;
  int delta_y_max = 20;
  bool swap_translation_axes = false;

  int interval_min = 3;
  int interval_max = 5;
  double rotation_min = -std::numbers::pi / 12.0;
  double rotation_max = std::numbers::pi / 12.0;
  double scale_min = 0.8;
  double scale_max = 1.2;
  double power_45_min = 0.4;
  double power_45_max = 1.0;
  double power_60_min = 0.2;
  double power_60_max = 0.8;

  // Per-variant application probabilities.
  double p_translate = 1.0;
  double p_speed = 0.5;
  double p_reverse = 0.5;
  double p_geometric = 0.5;
  double p_power = 0.5;
  bool randomize_resample_phase = false;

  int variants_per_input = 4;
  // Translations that would clip away more than this fraction of a
  // sequence's energy are redrawn (up to max_redraws times, then skipped).
  double min_energy_retention = 0.5;
  int max_redraws = 16;

  void validate() const;
};

DraiSequence translate(const DraiSequence& seq, int delta_range, int delta_angle);

/// Insert mode adds the mean of frames j and j+1 after every interval-th frame
/// j (1-based, j < T): T + floor((T-1)/interval) frames. Remove mode drops
/// every interval-th frame: T - floor(T/interval) frames. `phase` shifts the
/// first affected position to frame `phase` (1 <= phase <= interval); the
/// default phase of interval yields the lengths above.
DraiSequence resample_speed(const DraiSequence& seq, int interval, ResampleMode mode,
                            int phase = 0);

DraiSequence reverse_sequence(const DraiSequence& seq);

/// Re-runs the angle transform and noise elimination using only the first
/// n_channels receive channels of each archived frame.
DraiSequence reduce_antennas(const ChannelArchive& archive, int n_channels,
                             const RadarConfig& config, const PipelineParams& params);

DraiSequence scale_power(const DraiSequence& seq, double alpha);

TrajectoryProfile extract_trajectory_profile(const DraiSequence& seq);

/// Rotation by beta about the profile point farthest from the origin,
/// followed by axis scaling about the profile centroid.
TrajectoryProfile transform_profile(const TrajectoryProfile& profile, double beta,
                                    double gamma_x, double gamma_y);

/// Translates each frame by the rounded per-frame offset transformed - original.
DraiSequence apply_profile_offsets(const DraiSequence& seq, const TrajectoryProfile& original,
                                   const TrajectoryProfile& transformed);

/// Emits policy.variants_per_input variants per input. Each input draws from
/// its own seed derived from (seed, index), so results do not depend on the
/// batch order of other inputs.
std::vector<DraiSequence> augment_batch(std::span<const DraiSequence> dataset,
                                        const AugmentPolicy& policy, std::uint64_t seed);

}  // namespace mmg
