#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "mmgesture/common.hpp"

namespace mmg {

enum class LogBase : std::uint8_t { kNatural = 0, kBase10 = 1 };

struct SegmenterParams {
  double motion_threshold = 1.8;
  int detection_window = 3;   // frames
  int min_segment = 6;        // frames
  int max_segment = 50;       // frames
  LogBase log_base = LogBase::kNatural;
  // Half-widths of the peak exclusion band for the background estimate.
  int exclusion_range = 2;
  int exclusion_angle = 4;

  void validate() const;
};

/// log((E_peak + E_noise) / E_noise), where E_peak is the largest pixel and
/// E_noise the mean over pixels lying outside the peak's band on both axes.
/// Returns +infinity when the background is exactly zero.
double motion_indicator(const DraiFrame& frame, const SegmenterParams& params);

/// True when (r, a) belongs to the background set of a peak at (peak_r, peak_a).
bool in_background(std::size_t r, std::size_t a, std::size_t peak_r, std::size_t peak_a,
                   const SegmenterParams& params);

struct MotionIndicatorTrace {
  std::vector<double> eta;
  std::vector<bool> motion;
};

struct SegmentWindow {
  std::int64_t start_frame = 0;  // stream index of the first frame
  std::int64_t end_frame = 0;    // inclusive
  DraiSequence frames;

  std::int64_t length() const { return end_frame - start_frame + 1; }
};

/// Dynamic-window segmenter for one stream. A window opens once the last W
/// frames are all motion frames and closes once the last W are all static.
/// Emitted windows run from the first frame of the opening detection window
/// to the last motion frame before the closing one. Not thread-safe; use one
/// instance per stream.
class StreamSegmenter {
 public:
  explicit StreamSegmenter(SegmenterParams params);

  /// Feeds the next frame. Returns a segment when this frame closes one.
  std::optional<SegmentWindow> push(const DraiFrame& frame);

  /// Feeds a frame whose motion decision was made elsewhere.
  std::optional<SegmentWindow> push(const DraiFrame& frame, double eta);

  /// Ends the stream; emits an open window if it is long enough.
  std::optional<SegmentWindow> flush();

  const MotionIndicatorTrace& trace() const { return trace_; }
  bool window_open() const { return open_; }

 private:
  std::optional<SegmentWindow> emit(std::int64_t end);
  void reset_window();

  SegmenterParams params_;
  MotionIndicatorTrace trace_;
  std::int64_t next_index_ = 0;
  std::deque<DraiFrame> recent_;       // last W frames while idle
  std::deque<bool> recent_motion_;
  int run_motion_ = 0;                 // consecutive motion frames
  int run_static_ = 0;                 // consecutive static frames
  bool open_ = false;
  std::int64_t start_ = 0;
  std::int64_t last_motion_ = -1;
  std::vector<DraiFrame> window_;
};

std::vector<SegmentWindow> segment_stream(std::span<const DraiFrame> stream,
                                          const SegmenterParams& params);

struct TargetDetection {
  std::size_t range_bin = 0;
  std::size_t angle_bin = 0;
  double power = 0.0;
};

struct DetectionParams {
  int max_targets = 5;
  double stop_fraction = 0.1;
  double noise_floor = 0.0;
  int cancel_range = 2;
  int cancel_angle = 4;

  void validate() const;
};

/// Iterative detect-and-cancel on a static range-angle image.
std::vector<TargetDetection> detect_static_targets(const DraiFrame& srai,
                                                   const DetectionParams& params);

/// Inclusive, 0-based gates.
struct RegionOfInterest {
  std::size_t range_lo = 0;
  std::size_t range_hi = 0;
  std::size_t angle_lo = 0;
  std::size_t angle_hi = 0;

  static RegionOfInterest full(std::size_t range_bins, std::size_t angle_bins) {
    return {0, range_bins - 1, 0, angle_bins - 1};
  }
  bool contains(std::size_t r, std::size_t a) const {
    return r >= range_lo && r <= range_hi && a >= angle_lo && a <= angle_hi;
  }
};

struct RoiExtent {
  int range_half_width = 10;
  int angle_half_width = 10;
};

/// Gates centered on the nearest target, clipped to the image.
RegionOfInterest select_user_roi(std::span<const TargetDetection> targets, const RoiExtent& extent,
                                 std::size_t range_bins, std::size_t angle_bins);

DraiFrame mask_to_roi(const DraiFrame& frame, const RegionOfInterest& roi);

}  // namespace mmg
