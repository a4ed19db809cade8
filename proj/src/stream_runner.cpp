#include "mmgesture/stream_runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "mmgesture/augmentation.hpp"

namespace mmg {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

SyntheticSource::SyntheticSource(SyntheticStream stream, RadarConfig config)
    : stream_(std::move(stream)), config_(std::move(config)) {}

std::optional<AdcCube> SyntheticSource::next() {
  if (index_ >= stream_.frame_count()) return std::nullopt;
  return synthesize_stream_frame(stream_, config_, index_++);
}

std::optional<AdcCube> CubeListSource::next() {
  if (index_ >= cubes_.size()) return std::nullopt;
  return cubes_[index_++];
}

SegmentClassifier model_classifier(const Model& model) {
  return [&model](const SegmentWindow& w) { return predict(model, w); };
}

SegmentClassifier dtw_classifier(std::vector<LabeledProfile> templates) {
  if (templates.empty()) throw ValidationError("no templates");
  return [t = std::move(templates)](const SegmentWindow& w) {
    Prediction p;
    p.kind = dtw_nearest_neighbor(extract_trajectory_profile(w.frames), t);
    p.confidence = 1.0;
    p.probabilities.assign(kNumGestureClasses, 0.0);
    p.probabilities[static_cast<std::size_t>(p.kind)] = 1.0;
    return p;
  };
}

LatencySummary summarize_latency(std::vector<double> s) {
  LatencySummary out;
  if (s.empty()) return out;
  std::sort(s.begin(), s.end());
  auto rank = [&](double q) {
    const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.size())));
    return s[std::min(s.size() - 1, k == 0 ? 0 : k - 1)];
  };
  out.mean_ms = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  out.p50_ms = rank(0.50);
  out.p99_ms = rank(0.99);
  out.max_ms = s.back();
  return out;
}

StreamReport run_stream(FrameSource& source, const StreamOptions& o,
                        const SegmentClassifier& classifier,
                        std::span<const GroundTruthBurst> ground_truth) {
  o.radar.validate();
  o.pipeline.validate(o.radar);
  if (!classifier) throw ValidationError("no classifier supplied");
  StreamSegmenter segmenter(o.segmenter);
  StreamReport rep;
  std::vector<double> dsp, roi, seg, inf;
  const double tf = o.radar.frame_period;

  auto handle_segment = [&](const SegmentWindow& w, Clock::time_point frame_start) {
    ++rep.segments;
    const auto t0 = Clock::now();
    const Prediction p = classifier(w);
    inf.push_back(ms_since(t0));
    if (p.kind == GestureKind::kNegative) return;
    StreamEvent e;
    e.stream_id = o.stream_id;
    e.start_frame = w.start_frame;
    e.end_frame = w.end_frame;
    e.t_start_s = static_cast<double>(w.start_frame) * tf;
    e.t_end_s = static_cast<double>(w.end_frame + 1) * tf;
    e.kind = p.kind;
    e.confidence = p.confidence;
    e.latency_ms = ms_since(frame_start);
    if (o.on_event) o.on_event(e);
    rep.events.push_back(std::move(e));
  };

  const auto stream_start = Clock::now();
  std::int64_t index = 0;
  while (true) {
    if (o.pace) {
      std::this_thread::sleep_until(stream_start + std::chrono::duration_cast<Clock::duration>(
                                                       std::chrono::duration<double>(index * tf)));
    }
    auto cube = source.next();
    if (!cube) break;
    if (!cube->matches(o.radar)) {
      throw ValidationError("frame " + std::to_string(index) + " does not match the radar config");
    }

    const auto frame_start = Clock::now();
    const auto products = process_frame(*cube, o.radar, o.pipeline);
    dsp.push_back(ms_since(frame_start));

    auto t = Clock::now();
    DraiFrame drai = masked_drai(products, o.scene);
    drai.frame_index = index;
    drai.timestamp = static_cast<double>(index) * tf;
    roi.push_back(ms_since(t));

    t = Clock::now();
    auto closed = segmenter.push(drai);
    seg.push_back(ms_since(t));

    if (closed) handle_segment(*closed, frame_start);
    rep.frame_total_ms.push_back(ms_since(frame_start));
    ++index;
  }
  if (auto closed = segmenter.flush()) {
    const auto t = Clock::now();
    handle_segment(*closed, t);
    if (!rep.frame_total_ms.empty()) rep.frame_total_ms.back() += ms_since(t);
  }

  rep.frames = static_cast<std::size_t>(index);
  rep.dsp = summarize_latency(dsp);
  rep.roi = summarize_latency(roi);
  rep.segmentation = summarize_latency(seg);
  rep.inference = summarize_latency(inf);
  rep.total = summarize_latency(rep.frame_total_ms);
  if (!ground_truth.empty()) {
    rep.counters = score_events(rep.events, ground_truth);
    if (rep.counters->gestures > 0 && rep.counters->predictions > 0) {
      rep.cra_mpr = compute_cra_mpr(*rep.counters);
    }
  }
  return rep;
}

}  // namespace mmg
