#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmgesture/drai_pipeline.hpp"
#include "mmgesture/radar_front.hpp"

namespace mmg {

struct StageTiming {
  std::string stage;
  double mean_ms = 0.0;
  double p99_ms = 0.0;
};

struct BenchReport {
  int trials = 0;
  std::vector<StageTiming> signal_stages;  // range-Doppler, angle transform, noise elimination
  double signal_total_mean_ms = 0.0;       // one end-to-end pass timed separately
  std::vector<StageTiming> inference;      // lite and full model, 20-frame sequence
};

/// Times each signal stage over `trials` frames of a random two-target
/// scene, then each model size over `trials` inference runs. Requires
/// trials >= 100.
BenchReport bench_pipeline(const RadarConfig& config, const PipelineParams& params, int trials,
                           std::uint64_t seed = 0);

std::string format_bench(const BenchReport& report);

}  // namespace mmg
