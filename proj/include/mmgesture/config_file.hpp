#pragma once

#include <string>
#include <string_view>

#include "mmgesture/augmentation.hpp"
#include "mmgesture/classifier.hpp"
#include "mmgesture/drai_pipeline.hpp"
#include "mmgesture/radar_front.hpp"
#include "mmgesture/segmentation.hpp"

namespace mmg {

/// Every tunable of the system. Missing keys keep their defaults.
struct AppConfig {
  RadarConfig radar = default_config();
  PipelineParams pipeline;
  SegmenterParams segmenter;
  DetectionParams detection;
  RoiExtent roi;
  ModelConfig model = ModelConfig::full();
  TrainConfig train;
  AugmentPolicy augment;

  void validate() const;
};

/// JSON object with optional sections "radar", "pipeline", "segmenter",
/// "detection", "roi", "model", "train" and "augment". Unknown sections or
/// keys, and values of the wrong type, raise ValidationError.
AppConfig parse_config(std::string_view text);
AppConfig load_config(const std::string& path);
std::string dump_config(const AppConfig& config);

/// Augmentation policy as a JSON object or as "key = value" lines ('#'
/// starts a comment). Keys are those of the "augment" section.
AugmentPolicy parse_policy(std::string_view text);
AugmentPolicy load_policy(const std::string& path);

}  // namespace mmg
