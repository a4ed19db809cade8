#include "mmgesture/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmg {

void SegmenterParams::validate() const {
  if (detection_window < 2) throw ValidationError("detection window must be >= 2 frames");
  if (min_segment < 1 || min_segment >= max_segment) {
    throw ValidationError("segment bounds must satisfy 1 <= min_segment < max_segment");
  }
  if (exclusion_range < 0 || exclusion_angle < 0) throw ValidationError("negative exclusion band");
}

bool in_background(std::size_t r, std::size_t a, std::size_t peak_r, std::size_t peak_a,
                   const SegmenterParams& params) {
  const auto dr = std::abs(static_cast<long>(r) - static_cast<long>(peak_r));
  const auto da = std::abs(static_cast<long>(a) - static_cast<long>(peak_a));
  return dr > params.exclusion_range && da > params.exclusion_angle;
}

double motion_indicator(const DraiFrame& frame, const SegmenterParams& params) {
  if (frame.values.empty()) throw ValidationError("empty DRAI frame");
  const std::size_t peak = frame.argmax();
  const double e_peak = frame.values[peak];
  // A frame without energy carries no motion.
  if (!(e_peak > 0.0)) return 0.0;
  const std::size_t pr = peak / frame.angle_bins;
  const std::size_t pa = peak % frame.angle_bins;

  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < frame.range_bins; ++r) {
    for (std::size_t a = 0; a < frame.angle_bins; ++a) {
      if (!in_background(r, a, pr, pa, params)) continue;
      sum += frame.at(r, a);
      ++count;
    }
  }
  const double e_noise = count > 0 ? sum / static_cast<double>(count) : 0.0;
  if (!(e_noise > 0.0)) return std::numeric_limits<double>::infinity();
  const double ratio = (e_peak + e_noise) / e_noise;
  return params.log_base == LogBase::kBase10 ? std::log10(ratio) : std::log(ratio);
}

StreamSegmenter::StreamSegmenter(SegmenterParams params) : params_(params) { params_.validate(); }

std::optional<SegmentWindow> StreamSegmenter::push(const DraiFrame& frame) {
  return push(frame, motion_indicator(frame, params_));
}

std::optional<SegmentWindow> StreamSegmenter::push(const DraiFrame& frame, double eta) {
  const std::int64_t index = next_index_++;
  const bool motion = eta > params_.motion_threshold;
  trace_.eta.push_back(eta);
  trace_.motion.push_back(motion);
  const auto W = static_cast<std::size_t>(params_.detection_window);

  if (!open_) {
    recent_.push_back(frame);
    recent_motion_.push_back(motion);
    if (recent_.size() > W) {
      recent_.pop_front();
      recent_motion_.pop_front();
    }
    const bool all_motion = recent_.size() == W &&
                            std::all_of(recent_motion_.begin(), recent_motion_.end(),
                                        [](bool m) { return m; });
    if (all_motion) {
      open_ = true;
      start_ = index - static_cast<std::int64_t>(W) + 1;
      last_motion_ = index;
      run_static_ = 0;
      window_.assign(recent_.begin(), recent_.end());
      recent_.clear();
      recent_motion_.clear();
      if (static_cast<int>(window_.size()) >= params_.max_segment) return emit(index);
    }
    return std::nullopt;
  }

  window_.push_back(frame);
  if (motion) {
    last_motion_ = index;
    run_static_ = 0;
  } else {
    ++run_static_;
  }
  if (run_static_ >= params_.detection_window) return emit(last_motion_);
  if (index - start_ + 1 >= params_.max_segment) return emit(index);
  return std::nullopt;
}

std::optional<SegmentWindow> StreamSegmenter::flush() {
  if (!open_) return std::nullopt;
  return emit(last_motion_);
}

std::optional<SegmentWindow> StreamSegmenter::emit(std::int64_t end) {
  std::optional<SegmentWindow> out;
  const std::int64_t length = end - start_ + 1;
  if (length >= params_.min_segment) {
    SegmentWindow seg;
    seg.start_frame = start_;
    seg.end_frame = end;
    seg.frames.frames.assign(window_.begin(), window_.begin() + length);
    out = std::move(seg);
  }
  reset_window();
  return out;
}

void StreamSegmenter::reset_window() {
  open_ = false;
  window_.clear();
  recent_.clear();
  recent_motion_.clear();
  run_static_ = 0;
  last_motion_ = -1;
}

std::vector<SegmentWindow> segment_stream(std::span<const DraiFrame> stream,
                                          const SegmenterParams& params) {
  StreamSegmenter seg(params);
  std::vector<SegmentWindow> out;
  for (const auto& f : stream) {
    if (auto w = seg.push(f)) out.push_back(std::move(*w));
  }
  if (auto w = seg.flush()) out.push_back(std::move(*w));
  return out;
}

void DetectionParams::validate() const {
  if (max_targets < 0) throw ValidationError("max_targets must be >= 0");
  if (!(stop_fraction >= 0.0 && stop_fraction <= 1.0)) throw ValidationError("stop_fraction must lie in [0, 1]");
  if (!(noise_floor >= 0.0)) throw ValidationError("noise_floor must be >= 0");
  if (cancel_range < 0 || cancel_angle < 0) throw ValidationError("negative cancellation neighborhood");
}

std::vector<TargetDetection> detect_static_targets(const DraiFrame& srai,
                                                   const DetectionParams& params) {
  params.validate();
  std::vector<TargetDetection> found;
  if (srai.values.empty()) return found;
  std::vector<double> img(srai.values.begin(), srai.values.end());
  const auto rows = static_cast<long>(srai.range_bins);
  const auto cols = static_cast<long>(srai.angle_bins);
  double first_peak = 0.0;

  for (int k = 0; k < params.max_targets; ++k) {
    const auto it = std::max_element(img.begin(), img.end());
    const double power = *it;
    if (!(power > params.noise_floor)) break;
    if (!found.empty() && power < params.stop_fraction * first_peak) break;
    const auto idx = static_cast<long>(it - img.begin());
    const long r = idx / cols;
    const long a = idx % cols;
    if (found.empty()) first_peak = power;
    found.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(a), power});
    for (long rr = std::max(0L, r - params.cancel_range); rr <= std::min(rows - 1, r + params.cancel_range); ++rr) {
      for (long aa = std::max(0L, a - params.cancel_angle); aa <= std::min(cols - 1, a + params.cancel_angle); ++aa) {
        img[static_cast<std::size_t>(rr * cols + aa)] = 0.0;
      }
    }
  }
  return found;
}

RegionOfInterest select_user_roi(std::span<const TargetDetection> targets, const RoiExtent& extent,
                                 std::size_t range_bins, std::size_t angle_bins) {
  if (targets.empty()) throw ValidationError("no targets to select a user from");
  if (range_bins == 0 || angle_bins == 0) throw ValidationError("empty image");
  const auto nearest = std::min_element(targets.begin(), targets.end(),
                                        [](const TargetDetection& x, const TargetDetection& y) {
                                          return x.range_bin < y.range_bin;
                                        });
  auto clip_lo = [](std::size_t c, int half) {
    return c > static_cast<std::size_t>(half) ? c - static_cast<std::size_t>(half) : std::size_t{0};
  };
  auto clip_hi = [](std::size_t c, int half, std::size_t n) {
    return std::min(n - 1, c + static_cast<std::size_t>(half));
  };
  const std::size_t r = std::min(nearest->range_bin, range_bins - 1);
  const std::size_t a = std::min(nearest->angle_bin, angle_bins - 1);
  return {clip_lo(r, extent.range_half_width), clip_hi(r, extent.range_half_width, range_bins),
          clip_lo(a, extent.angle_half_width), clip_hi(a, extent.angle_half_width, angle_bins)};
}

DraiFrame mask_to_roi(const DraiFrame& frame, const RegionOfInterest& roi) {
  DraiFrame out = frame;
  for (std::size_t r = 0; r < frame.range_bins; ++r) {
    for (std::size_t a = 0; a < frame.angle_bins; ++a) {
      if (!roi.contains(r, a)) out.at(r, a) = 0.0f;
    }
  }
  return out;
}

}  // namespace mmg
