#include "mmgesture/common.hpp"

#include <array>
#include <numeric>

namespace mmg {
namespace {

constexpr std::array<std::string_view, kNumGestureClasses> kCodes = {
    "PH", "PL", "LS", "RS", "CT", "AT", "NG"};

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed ^ (index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string_view gesture_code(GestureKind kind) {
  return kCodes.at(static_cast<std::size_t>(kind));
}

GestureKind parse_gesture_code(std::string_view code) {
  for (std::size_t i = 0; i < kCodes.size(); ++i) {
    if (kCodes[i] == code) return static_cast<GestureKind>(i);
  }
  throw ValidationError("unknown gesture code '" + std::string(code) + "'");
}

GestureKind gesture_from_index(int index) {
  if (index < 0 || index >= kNumGestureClasses) {
    throw ValidationError("gesture class index out of range: " + std::to_string(index));
  }
  return static_cast<GestureKind>(index);
}

bool is_predefined_gesture(GestureKind kind) { return kind != GestureKind::kNegative; }

GestureKind paired_gesture(GestureKind kind) {
  switch (kind) {
    case GestureKind::kPush: return GestureKind::kPull;
    case GestureKind::kPull: return GestureKind::kPush;
    case GestureKind::kLeftSwipe: return GestureKind::kRightSwipe;
    case GestureKind::kRightSwipe: return GestureKind::kLeftSwipe;
    case GestureKind::kClockwise: return GestureKind::kAnticlockwise;
    case GestureKind::kAnticlockwise: return GestureKind::kClockwise;
    case GestureKind::kNegative: break;
  }
  throw ValidationError("negative samples have no paired gesture");
}

double DraiFrame::energy() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

std::size_t DraiFrame::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

void check_uniform_shape(const DraiSequence& seq) {
  if (seq.frames.empty()) return;
  const auto& first = seq.frames.front();
  for (const auto& f : seq.frames) {
    if (!f.same_shape(first) || f.values.size() != f.range_bins * f.angle_bins) {
      throw ValidationError("DRAI sequence frames have inconsistent shapes");
    }
  }
}

}  // namespace mmg
