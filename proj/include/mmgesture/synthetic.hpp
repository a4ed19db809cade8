#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmgesture/classifier.hpp"
#include "mmgesture/common.hpp"
#include "mmgesture/drai_pipeline.hpp"
#include "mmgesture/metrics.hpp"
#include "mmgesture/radar_front.hpp"
#include "mmgesture/segmentation.hpp"

namespace mmg {

/// Scene-level processing shared by offline synthesis and the stream runner.
struct SceneOptions {
  bool include_body = true;  // static torso and shoulder behind the hand
  bool roi_mask = true;      // mask each DRAI to the nearest user's ROI
  DetectionParams detection;
  RoiExtent roi;
};

/// DRAI of one frame after optional ROI masking.
DraiFrame masked_drai(const FrameProducts& products, const SceneOptions& scene);

struct SynthesizedSequence {
  DraiSequence drai;
  ChannelArchive archive;  // filled only when requested
};

SynthesizedSequence synthesize_sequence(const GestureScript& script, const RadarConfig& config,
                                        const PipelineParams& params, const SceneOptions& scene,
                                        std::uint64_t seed, bool keep_archive = false);

struct AnchorLocation {
  std::string id;
  double distance = 0.8;  // m
  double angle = 0.0;     // rad
};

/// Anchors used to build training data.
std::vector<AnchorLocation> training_locations();

/// Anchors never seen in training, used for generalization tests.
std::vector<AnchorLocation> held_out_locations();

struct ScriptVariation {
  double duration_min = 0.9, duration_max = 1.4;  // s
  double extent_min = 0.85, extent_max = 1.15;
  double reflectivity_min = 0.7, reflectivity_max = 1.3;
  double snr_min_db = 15.0, snr_max_db = 25.0;
  double distance_jitter = 0.03;  // m
  double angle_jitter = 0.05;     // rad
};

/// A randomized performance of `kind` at `where`.
GestureScript random_script(GestureKind kind, const AnchorLocation& where,
                            const ScriptVariation& variation, std::mt19937_64& rng);

struct DatasetSpec {
  std::vector<AnchorLocation> locations;
  int count = 0;  // sequence i has class i % 7 and location (i / 7) % locations
  bool include_negative = true;
  ScriptVariation variation;
  std::uint64_t seed = 0;
};

std::vector<DraiSequence> generate_dataset(const DatasetSpec& spec, const RadarConfig& config,
                                           const PipelineParams& params, const SceneOptions& scene);

struct StreamScriptOptions {
  int gestures = 60;
  int gap_min = 12;  // static frames between bursts
  int gap_max = 20;
  int lead_in = 10;  // static frames before the first burst
  int tail = 10;
  bool include_negative = false;
  bool static_only = false;  // ignore gestures; produce lead_in + tail static frames
  AnchorLocation anchor{"stream", 0.8, 0.0};
  ScriptVariation variation;
  double snr_db = 20.0;
  std::uint64_t seed = 0;
};

struct SyntheticStream {
  std::vector<ScattererSet> scenes;  // one per frame
  std::vector<GroundTruthBurst> bursts;
  double snr_db = 20.0;
  std::uint64_t seed = 0;

  std::size_t frame_count() const { return scenes.size(); }
};

SyntheticStream make_stream(const StreamScriptOptions& options, const RadarConfig& config);

AdcCube synthesize_stream_frame(const SyntheticStream& stream, const RadarConfig& config,
                                std::size_t index);

/// Clean, noiseless reference profiles for each predefined gesture at `where`.
std::vector<LabeledProfile> make_dtw_templates(const AnchorLocation& where,
                                               const RadarConfig& config,
                                               const PipelineParams& params,
                                               const SceneOptions& scene);

}  // namespace mmg
