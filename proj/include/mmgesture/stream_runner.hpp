#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mmgesture/classifier.hpp"
#include "mmgesture/drai_pipeline.hpp"
#include "mmgesture/metrics.hpp"
#include "mmgesture/radar_front.hpp"
#include "mmgesture/segmentation.hpp"
#include "mmgesture/synthetic.hpp"

namespace mmg {

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  /// Next ADC frame, or nullopt at end of stream.
  virtual std::optional<AdcCube> next() = 0;
};

/// Synthesizes frames of a scripted stream on demand.
class SyntheticSource : public FrameSource {
 public:
  SyntheticSource(SyntheticStream stream, RadarConfig config);
  std::optional<AdcCube> next() override;
  const SyntheticStream& stream() const { return stream_; }

 private:
  SyntheticStream stream_;
  RadarConfig config_;
  std::size_t index_ = 0;
};

/// Replays frames already in memory (e.g. read from a capture file).
class CubeListSource : public FrameSource {
 public:
  explicit CubeListSource(std::vector<AdcCube> cubes) : cubes_(std::move(cubes)) {}
  std::optional<AdcCube> next() override;

 private:
  std::vector<AdcCube> cubes_;
  std::size_t index_ = 0;
};

using SegmentClassifier = std::function<Prediction(const SegmentWindow&)>;

SegmentClassifier model_classifier(const Model& model);

/// Nearest-template classifier over trajectory profiles; confidence 1.
SegmentClassifier dtw_classifier(std::vector<LabeledProfile> templates);

struct StreamOptions {
  std::string stream_id = "stream";
  bool pace = false;  // hold each frame until its scheduled arrival time
  RadarConfig radar = default_config();
  PipelineParams pipeline;
  SceneOptions scene;
  SegmenterParams segmenter;
  std::function<void(const StreamEvent&)> on_event;
};

struct LatencySummary {
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
};

LatencySummary summarize_latency(std::vector<double> samples_ms);

struct StreamReport {
  std::vector<StreamEvent> events;
  std::size_t frames = 0;
  std::size_t segments = 0;  // all closed segments, negatives included
  // Per-frame processing: DSP, ROI masking, motion indicator plus window
  // logic, and inference on frames that close a segment.
  LatencySummary dsp, roi, segmentation, inference, total;
  std::vector<double> frame_total_ms;
  std::optional<EvalCounters> counters;
  std::optional<CraMpr> cra_mpr;
};

/// Runs the full chain frame by frame. Events are emitted in frame order.
/// When ground truth is supplied the report carries CRA/MPR.
StreamReport run_stream(FrameSource& source, const StreamOptions& options,
                        const SegmentClassifier& classifier,
                        std::span<const GroundTruthBurst> ground_truth = {});

}  // namespace mmg
