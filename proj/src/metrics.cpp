#include "mmgesture/metrics.hpp"

#include <algorithm>

#include "json.hpp"

namespace mmg {

std::string to_json_line(const StreamEvent& e) {
  nlohmann::ordered_json j;
  j["stream_id"] = e.stream_id;
  j["start_frame"] = e.start_frame;
  j["end_frame"] = e.end_frame;
  j["t_start_s"] = e.t_start_s;
  j["t_end_s"] = e.t_end_s;
  j["class"] = std::string(gesture_code(e.kind));
  j["confidence"] = e.confidence;
  j["latency_ms"] = e.latency_ms;
  return j.dump();
}

CraMpr compute_cra_mpr(const EvalCounters& c) {
  if (c.gestures <= 0) throw ValidationError("CRA needs at least one gesture (N > 0)");
  if (c.predictions <= 0) throw ValidationError("MPR needs at least one prediction (P > 0)");
  if (c.misclassified < 0 || c.missed < 0 || c.misclassified + c.missed > c.gestures) {
    throw ValidationError("counters violate 0 <= W + M <= N");
  }
  const auto n = static_cast<double>(c.gestures);
  return {1.0 - static_cast<double>(c.misclassified + c.missed) / n,
          1.0 - n / static_cast<double>(c.predictions)};
}

EvalCounters score_events(std::span<const StreamEvent> events,
                          std::span<const GroundTruthBurst> bursts) {
  EvalCounters c;
  c.predictions = static_cast<std::int64_t>(events.size());
  for (const auto& b : bursts) {
    if (b.kind == GestureKind::kNegative) continue;
    ++c.gestures;
    const StreamEvent* match = nullptr;
    for (const auto& e : events) {
      // Midpoint in frame units, doubled to stay integral.
      const std::int64_t mid2 = e.start_frame + e.end_frame;
      if (mid2 >= 2 * b.start_frame && mid2 <= 2 * b.end_frame) {
        match = &e;
        break;
      }
    }
    if (!match) {
      const std::int64_t len = b.end_frame - b.start_frame + 1;
      for (const auto& e : events) {
        const std::int64_t overlap =
            std::min(e.end_frame, b.end_frame) - std::max(e.start_frame, b.start_frame) + 1;
        if (2 * overlap >= len) {
          match = &e;
          break;
        }
      }
    }
    if (!match) {
      ++c.missed;
    } else if (match->kind != b.kind) {
      ++c.misclassified;
    }
  }
  return c;
}

}  // namespace mmg
