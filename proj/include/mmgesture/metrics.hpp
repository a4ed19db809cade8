#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "mmgesture/common.hpp"

namespace mmg {

/// Frames during which a scripted gesture is in motion.
struct GroundTruthBurst {
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;  // inclusive
  GestureKind kind = GestureKind::kPush;
};

/// One recognized gesture. Negative-class segments never become events.
struct StreamEvent {
  std::string stream_id;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;
  double t_start_s = 0.0;
  double t_end_s = 0.0;
  GestureKind kind = GestureKind::kPush;
  double confidence = 0.0;
  double latency_ms = 0.0;
};

std::string to_json_line(const StreamEvent& event);

struct EvalCounters {
  std::int64_t gestures = 0;       // N
  std::int64_t misclassified = 0;  // W
  std::int64_t missed = 0;         // M
  std::int64_t predictions = 0;    // P
};

struct CraMpr {
  double cra = 0.0;
  double mpr = 0.0;
};

/// CRA = 1 - (W + M) / N, MPR = 1 - N / P.
CraMpr compute_cra_mpr(const EvalCounters& counters);

/// Matches events to gesture bursts. An event belongs to a burst when its
/// segment midpoint lies inside the burst; failing that, the first event
/// covering at least half of the burst is used. A burst without an event is
/// missed; one whose event has another class is misclassified. Every event
/// counts as a prediction. Negative-class bursts are not gestures.
EvalCounters score_events(std::span<const StreamEvent> events,
                          std::span<const GroundTruthBurst> bursts);

}  // namespace mmg
