#pragma once

#include <span>
#include <vector>

#include "mmgesture/common.hpp"
#include "mmgesture/radar_front.hpp"

namespace mmg {

enum class WindowKind : std::uint8_t { kRectangular = 0, kHann = 1 };

struct PipelineParams {
  int doppler_bin_threshold = 2;        // bins zeroed on each side of zero Doppler
  double power_threshold_factor = 0.25; // fraction of the peak Doppler power
  WindowKind window = WindowKind::kRectangular;

  void validate(const RadarConfig& config) const;
};

/// Range x Doppler spectrum of one receive channel, row-major [range][doppler].
/// The Doppler axis is shifted so zero velocity sits at doppler_bins / 2.
struct RangeDopplerImage {
  std::size_t range_bins = 0;
  std::size_t doppler_bins = 0;
  std::vector<Complex> values;
  int channel_index = 0;

  Complex& at(std::size_t r, std::size_t d) { return values[r * doppler_bins + d]; }
  const Complex& at(std::size_t r, std::size_t d) const { return values[r * doppler_bins + d]; }
};

/// Layout [range][doppler][angle]; angle axis shifted so broadside is at I/2.
struct RangeDopplerAngleTensor {
  std::size_t range_bins = 0;
  std::size_t doppler_bins = 0;
  std::size_t angle_bins = 0;
  std::vector<Complex> values;

  const Complex& at(std::size_t r, std::size_t d, std::size_t a) const {
    return values[(r * doppler_bins + d) * angle_bins + a];
  }
};

/// Per-frame channel spectra kept for re-processing with fewer antennas.
using ChannelArchive = std::vector<std::vector<RangeDopplerImage>>;

/// Fast-time transform (first K bins kept) then centered slow-time transform,
/// once per channel.
std::vector<RangeDopplerImage> range_doppler(const AdcCube& cube, const RadarConfig& config,
                                             WindowKind window = WindowKind::kRectangular);

/// Cross-channel transform zero-padded to angle_fft_size, centered.
/// Requires exactly config.rx_channels images.
RangeDopplerAngleTensor angle_fft(std::span<const RangeDopplerImage> rdis,
                                  const RadarConfig& config);

/// Doppler power profile after static suppression: for each Doppler bin, the
/// sum over range of the channel-mean magnitude. Bins within +-tau of zero
/// Doppler are zero.
std::vector<double> doppler_power(std::span<const RangeDopplerImage> rdis,
                                  const PipelineParams& params);

/// Noise elimination: suppress static bins, threshold the Doppler power at
/// alpha * max, and sum angle-spectrum magnitudes over the surviving Doppler
/// bins. Only surviving bins are angle-transformed.
DraiFrame noise_eliminate(std::span<const RangeDopplerImage> rdis, const PipelineParams& params,
                          const RadarConfig& config);

/// Same accumulation driven by a precomputed full range-Doppler-angle tensor.
DraiFrame noise_eliminate(std::span<const RangeDopplerImage> rdis,
                          const RangeDopplerAngleTensor& rda, const PipelineParams& params);

/// Static range-angle image: angle spectrum magnitude of the zero-Doppler column.
DraiFrame static_rai(std::span<const RangeDopplerImage> rdis, const RadarConfig& config);

/// Everything the downstream stages need from one ADC frame.
struct FrameProducts {
  std::vector<RangeDopplerImage> rdis;
  DraiFrame drai;
  DraiFrame srai;
};

FrameProducts process_frame(const AdcCube& cube, const RadarConfig& config,
                            const PipelineParams& params);

}  // namespace mmg
