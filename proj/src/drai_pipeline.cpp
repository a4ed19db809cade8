#include "mmgesture/drai_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmgesture/fft.hpp"

namespace mmg {
namespace {

void check_channel_set(std::span<const RangeDopplerImage> rdis) {
  if (rdis.empty()) throw ValidationError("no range-Doppler images supplied");
  const auto& first = rdis.front();
  for (const auto& rd : rdis) {
    if (rd.range_bins != first.range_bins || rd.doppler_bins != first.doppler_bins ||
        rd.values.size() != rd.range_bins * rd.doppler_bins) {
      throw ValidationError("range-Doppler images have inconsistent shapes");
    }
  }
}

void check_channel_count(std::span<const RangeDopplerImage> rdis, const RadarConfig& config) {
  check_channel_set(rdis);
  if (static_cast<int>(rdis.size()) != config.rx_channels) {
    throw ValidationError("expected " + std::to_string(config.rx_channels) +
                          " channel images, got " + std::to_string(rdis.size()));
  }
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  return kind == WindowKind::kHann ? hann_window(n) : std::vector<double>(n, 1.0);
}

// Zero-padded, centered angle spectrum of the channel vector at (r, d).
void angle_spectrum(std::span<const RangeDopplerImage> rdis, std::size_t r, std::size_t d,
                    std::span<Complex> out) {
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t k = 0; k < rdis.size(); ++k) out[k] = rdis[k].at(r, d);
  fft_forward(out);
  fft_shift(out);
}

double threshold_of(const std::vector<double>& dp, double factor) {
  const double peak = dp.empty() ? 0.0 : *std::max_element(dp.begin(), dp.end());
  return factor * peak;
}

DraiFrame to_frame(const std::vector<double>& acc, std::size_t rows, std::size_t cols) {
  DraiFrame frame(rows, cols);
  for (std::size_t i = 0; i < acc.size(); ++i) frame.values[i] = static_cast<float>(acc[i]);
  return frame;
}

}  // namespace

void PipelineParams::validate(const RadarConfig& config) const {
  if (doppler_bin_threshold < 0 || doppler_bin_threshold >= config.chirps_per_frame / 2) {
    throw ValidationError("doppler_bin_threshold must lie in [0, L/2)");
  }
  if (!(power_threshold_factor > 0.0 && power_threshold_factor < 1.0)) {
    throw ValidationError("power_threshold_factor must lie in (0, 1)");
  }
}

std::vector<RangeDopplerImage> range_doppler(const AdcCube& cube, const RadarConfig& config,
                                             WindowKind window) {
  if (!cube.matches(config)) throw ValidationError("ADC cube shape does not match the radar config");
  const auto L = static_cast<std::size_t>(config.chirps_per_frame);
  const auto S = static_cast<std::size_t>(config.samples_per_chirp);
  const auto K = static_cast<std::size_t>(config.kept_range_bins);
  const int N = config.rx_channels;
  const auto w_fast = make_window(window, S);
  const auto w_slow = make_window(window, L);

  std::vector<RangeDopplerImage> out(static_cast<std::size_t>(N));
  std::vector<Complex> fast(S);
  std::vector<Complex> slow(L);
  std::vector<Complex> range_major(K * L);  // [range][chirp]
  for (int k = 0; k < N; ++k) {
    for (std::size_t m = 0; m < L; ++m) {
      for (std::size_t n = 0; n < S; ++n) {
        const auto v = cube.at(static_cast<int>(m), static_cast<int>(n), k);
        fast[n] = Complex(v.real(), v.imag()) * w_fast[n];
      }
      fft_forward(fast);
      for (std::size_t r = 0; r < K; ++r) range_major[r * L + m] = fast[r] * w_slow[m];
    }
    auto& rd = out[static_cast<std::size_t>(k)];
    rd.range_bins = K;
    rd.doppler_bins = L;
    rd.channel_index = k;
    rd.values.resize(K * L);
    for (std::size_t r = 0; r < K; ++r) {
      std::copy_n(range_major.begin() + static_cast<std::ptrdiff_t>(r * L), L, slow.begin());
      fft_forward(slow);
      fft_shift(slow);
      std::copy(slow.begin(), slow.end(), rd.values.begin() + static_cast<std::ptrdiff_t>(r * L));
    }
  }
  return out;
}

RangeDopplerAngleTensor angle_fft(std::span<const RangeDopplerImage> rdis,
                                  const RadarConfig& config) {
  check_channel_count(rdis, config);
  RangeDopplerAngleTensor t;
  t.range_bins = rdis.front().range_bins;
  t.doppler_bins = rdis.front().doppler_bins;
  t.angle_bins = static_cast<std::size_t>(config.angle_fft_size);
  t.values.resize(t.range_bins * t.doppler_bins * t.angle_bins);
  std::vector<Complex> spec(t.angle_bins);
  for (std::size_t r = 0; r < t.range_bins; ++r) {
    for (std::size_t d = 0; d < t.doppler_bins; ++d) {
      angle_spectrum(rdis, r, d, spec);
      std::copy(spec.begin(), spec.end(),
                t.values.begin() + static_cast<std::ptrdiff_t>((r * t.doppler_bins + d) * t.angle_bins));
    }
  }
  return t;
}

std::vector<double> doppler_power(std::span<const RangeDopplerImage> rdis,
                                  const PipelineParams& params) {
  check_channel_set(rdis);
  const std::size_t K = rdis.front().range_bins;
  const std::size_t L = rdis.front().doppler_bins;
  const auto center = static_cast<std::ptrdiff_t>(L / 2);
  const auto inv_n = 1.0 / static_cast<double>(rdis.size());
  std::vector<double> dp(L, 0.0);
  for (std::size_t d = 0; d < L; ++d) {
    if (std::abs(static_cast<std::ptrdiff_t>(d) - center) <= params.doppler_bin_threshold) continue;
    double sum = 0.0;
    for (std::size_t r = 0; r < K; ++r) {
      double mean = 0.0;
      for (const auto& rd : rdis) mean += std::abs(rd.at(r, d));
      sum += mean * inv_n;
    }
    dp[d] = sum;
  }
  return dp;
}

DraiFrame noise_eliminate(std::span<const RangeDopplerImage> rdis, const PipelineParams& params,
                          const RadarConfig& config) {
  check_channel_count(rdis, config);
  const std::size_t K = rdis.front().range_bins;
  const std::size_t L = rdis.front().doppler_bins;
  const auto I = static_cast<std::size_t>(config.angle_fft_size);
  const auto dp = doppler_power(rdis, params);
  const double threshold = threshold_of(dp, params.power_threshold_factor);

  std::vector<double> acc(K * I, 0.0);
  std::vector<Complex> spec(I);
  for (std::size_t d = 0; d < L; ++d) {
    if (!(dp[d] > threshold)) continue;
    for (std::size_t r = 0; r < K; ++r) {
      angle_spectrum(rdis, r, d, spec);
      double* row = acc.data() + r * I;
      for (std::size_t a = 0; a < I; ++a) row[a] += std::abs(spec[a]);
    }
  }
  return to_frame(acc, K, I);
}

DraiFrame noise_eliminate(std::span<const RangeDopplerImage> rdis,
                          const RangeDopplerAngleTensor& rda, const PipelineParams& params) {
  check_channel_set(rdis);
  if (rda.range_bins != rdis.front().range_bins || rda.doppler_bins != rdis.front().doppler_bins) {
    throw ValidationError("range-Doppler-angle tensor does not match the channel images");
  }
  const std::size_t K = rda.range_bins;
  const std::size_t L = rda.doppler_bins;
  const std::size_t I = rda.angle_bins;
  const auto dp = doppler_power(rdis, params);
  const double threshold = threshold_of(dp, params.power_threshold_factor);

  std::vector<double> acc(K * I, 0.0);
  for (std::size_t d = 0; d < L; ++d) {
    if (!(dp[d] > threshold)) continue;
    for (std::size_t r = 0; r < K; ++r) {
      double* row = acc.data() + r * I;
      for (std::size_t a = 0; a < I; ++a) row[a] += std::abs(rda.at(r, d, a));
    }
  }
  return to_frame(acc, K, I);
}

DraiFrame static_rai(std::span<const RangeDopplerImage> rdis, const RadarConfig& config) {
  check_channel_count(rdis, config);
  const std::size_t K = rdis.front().range_bins;
  const std::size_t zero_bin = rdis.front().doppler_bins / 2;
  const auto I = static_cast<std::size_t>(config.angle_fft_size);
  std::vector<double> acc(K * I, 0.0);
  std::vector<Complex> spec(I);
  for (std::size_t r = 0; r < K; ++r) {
    angle_spectrum(rdis, r, zero_bin, spec);
    for (std::size_t a = 0; a < I; ++a) acc[r * I + a] = std::abs(spec[a]);
  }
  return to_frame(acc, K, I);
}

FrameProducts process_frame(const AdcCube& cube, const RadarConfig& config,
                            const PipelineParams& params) {
  FrameProducts p;
  p.rdis = range_doppler(cube, config, params.window);
  p.drai = noise_eliminate(p.rdis, params, config);
  p.srai = static_rai(p.rdis, config);
  p.drai.frame_index = p.srai.frame_index = cube.frame_index;
  p.drai.timestamp = p.srai.timestamp = static_cast<double>(cube.frame_index) * config.frame_period;
  return p;
}

}  // namespace mmg
