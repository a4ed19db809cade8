#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mmg {

using Complex = std::complex<double>;

/// Raised when an input violates a documented precondition, shape contract
/// or file format. The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The six predefined gestures plus the negative (non-gesture) class.
/// Numeric values are the on-disk label bytes.
enum class GestureKind : std::uint8_t {
  kPush = 0,
  kPull = 1,
  kLeftSwipe = 2,
  kRightSwipe = 3,
  kClockwise = 4,
  kAnticlockwise = 5,
  kNegative = 6,
};

inline constexpr int kNumGestureClasses = 7;
inline constexpr std::uint8_t kUnlabeledByte = 255;

/// Stateless 64-bit seed derivation for independent substreams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

std::string_view gesture_code(GestureKind kind);
GestureKind parse_gesture_code(std::string_view code);
GestureKind gesture_from_index(int index);
bool is_predefined_gesture(GestureKind kind);

/// PH<->PL, LS<->RS, CT<->AT. Throws ValidationError for the negative class.
GestureKind paired_gesture(GestureKind kind);

/// A real-valued range x angle image. Used for DRAI and SRAI frames.
/// Storage is row-major with range as the row index.
struct DraiFrame {
  std::size_t range_bins = 0;
  std::size_t angle_bins = 0;
  std::vector<float> values;
  std::int64_t frame_index = 0;
  double timestamp = 0.0;

  DraiFrame() = default;
  DraiFrame(std::size_t rows, std::size_t cols)
      : range_bins(rows), angle_bins(cols), values(rows * cols, 0.0f) {}

  float& at(std::size_t r, std::size_t a) { return values[r * angle_bins + a]; }
  float at(std::size_t r, std::size_t a) const { return values[r * angle_bins + a]; }

  bool same_shape(const DraiFrame& other) const {
    return range_bins == other.range_bins && angle_bins == other.angle_bins;
  }

  /// Sum of all pixel values.
  double energy() const;

  /// Index of the largest pixel, ties broken by smallest range then smallest
  /// angle bin (row-major first occurrence).
  std::size_t argmax() const;
};

struct DraiSequence {
  std::vector<DraiFrame> frames;
  std::optional<GestureKind> label;
  double angle_tag = 0.0;  // anchor angle of the source, radians

  std::size_t length() const { return frames.size(); }
};

/// Throws ValidationError unless every frame shares the first frame's shape.
void check_uniform_shape(const DraiSequence& seq);

}  // namespace mmg
