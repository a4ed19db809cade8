#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "mmgesture/drai_pipeline.hpp"
#include "oracles.hpp"

using namespace mmg;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<std::size_t, std::size_t> peak_of(const DraiFrame& f) {
  const auto i = f.argmax();
  return {i / f.angle_bins, i % f.angle_bins};
}

std::pair<std::size_t, std::size_t> rd_peak(const RangeDopplerImage& rd) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rd.values.size(); ++i) {
    if (std::abs(rd.values[i]) > std::abs(rd.values[best])) best = i;
  }
  return {best / rd.doppler_bins, best % rd.doppler_bins};
}

float max_pixel(const DraiFrame& f) { return *std::max_element(f.values.begin(), f.values.end()); }

float row_max(const DraiFrame& f, std::size_t r) {
  float m = 0.0f;
  for (std::size_t a = 0; a < f.angle_bins; ++a) m = std::max(m, f.at(r, a));
  return m;
}

// Largest |library - oracle| over the image, relative to the oracle peak.
double relative_gap(const DraiFrame& lib, const std::vector<std::vector<double>>& ref) {
  double peak = 0.0, gap = 0.0;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    for (std::size_t a = 0; a < ref[r].size(); ++a) {
      peak = std::max(peak, ref[r][a]);
      gap = std::max(gap, std::abs(static_cast<double>(lib.at(r, a)) - ref[r][a]));
    }
  }
  return peak > 0.0 ? gap / peak : gap;
}

}  // namespace

TEST_CASE("zero cube gives zero range-Doppler images") {
  const auto c = default_config();
  const auto rdis = range_doppler(AdcCube(c.chirps_per_frame, c.samples_per_chirp, c.rx_channels), c);
  REQUIRE(rdis.size() == 8);
  for (const auto& rd : rdis) {
    CHECK(rd.range_bins == 32);
    CHECK(rd.doppler_bins == 128);
    CHECK(std::all_of(rd.values.begin(), rd.values.end(), [](Complex v) { return v == Complex{}; }));
  }
}

TEST_CASE("range-Doppler rejects mismatched cubes") {
  const auto c = default_config();
  CHECK_THROWS_AS(range_doppler(AdcCube(64, 128, 8), c), ValidationError);
  const auto rdis = range_doppler(AdcCube(128, 128, 8), c);
  std::vector<RangeDopplerImage> four(rdis.begin(), rdis.begin() + 4);
  CHECK_THROWS_AS(angle_fft(four, c), ValidationError);
  CHECK_THROWS_AS(noise_eliminate(four, PipelineParams{}, c), ValidationError);
}

TEST_CASE("mover at 0.47 m and 0.39 m/s peaks at (10, L/2 + 10)") {
  const auto c = default_config();
  const auto rdis = range_doppler(synthesize_frame(c, {{0.47, 0.0, 0.39, 1.0}}, kInf, 0), c);
  for (const auto& rd : rdis) {
    const auto [r, d] = rd_peak(rd);
    CHECK(r == 10);
    CHECK(d == 74);
  }
}

TEST_CASE("two movers give two local maxima at their bins") {
  const auto c = default_config();
  const auto rdis = range_doppler(
      synthesize_frame(c, {{0.47, 0.0, 0.39, 1.0}, {0.94, 0.0, -0.234, 0.8}}, kInf, 0), c);
  const auto& rd = rdis[0];
  auto is_local_max = [&](std::size_t r, std::size_t d) {
    const double v = std::abs(rd.at(r, d));
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dd = -1; dd <= 1; ++dd) {
        if (dr == 0 && dd == 0) continue;
        if (std::abs(rd.at(r + dr, d + dd)) >= v) return false;
      }
    }
    return true;
  };
  CHECK(is_local_max(10, 74));
  CHECK(is_local_max(20, 58));
}

TEST_CASE("range-Doppler matches the direct DFT oracle") {
  const auto c = default_config();
  gen::Gen g(5);
  const auto cube = synthesize_frame(c, {g.scatterer(c), g.scatterer(c)}, 15.0, 9);
  const auto rdis = range_doppler(cube, c);
  for (int k : {0, 7}) {
    const auto ref = oracle::range_doppler(cube, k, c.kept_range_bins);
    double peak = 0.0, gap = 0.0;
    for (std::size_t r = 0; r < 32; ++r) {
      for (std::size_t d = 0; d < 128; ++d) {
        peak = std::max(peak, std::abs(ref[r][d]));
        gap = std::max(gap, std::abs(ref[r][d] - rdis[k].at(r, d)));
      }
    }
    CHECK(gap / peak < 1e-9);
  }
}

TEST_CASE("angle transform places broadside at 16 and 30 degrees at 24") {
  const auto c = default_config();
  for (auto [deg, bin] : {std::pair{0.0, 16u}, std::pair{30.0, 24u}, std::pair{-30.0, 8u}}) {
    const auto rdis = range_doppler(synthesize_frame(c, {{0.47, deg * kDeg, 0.39, 1.0}}, kInf, 0), c);
    const auto rda = angle_fft(rdis, c);
    CHECK(rda.angle_bins == 32);
    std::size_t best = 0;
    for (std::size_t a = 1; a < 32; ++a) {
      if (std::abs(rda.at(10, 74, a)) > std::abs(rda.at(10, 74, best))) best = a;
    }
    CHECK(best == bin);
  }
}

TEST_CASE("a common phase on every channel leaves angle magnitudes unchanged") {
  const auto c = default_config();
  auto rdis = range_doppler(synthesize_frame(c, {{0.6, 0.3, 0.2, 1.0}}, 20.0, 1), c);
  const auto before = angle_fft(rdis, c);
  const Complex rot = std::polar(1.0, 1.234);
  for (auto& rd : rdis) {
    for (auto& v : rd.values) v *= rot;
  }
  const auto after = angle_fft(rdis, c);
  double gap = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < before.values.size(); ++i) {
    peak = std::max(peak, std::abs(before.values[i]));
    gap = std::max(gap, std::abs(std::abs(before.values[i]) - std::abs(after.values[i])));
  }
  CHECK(gap / peak < 1e-12);
}

TEST_CASE("static-only scenes give an all-zero DRAI") {
  const auto c = default_config();
  gen::Gen g(11);
  for (int trial = 0; trial < 5; ++trial) {
    ScattererSet scene;
    for (int i = 0; i < 3; ++i) {
      auto s = g.scatterer(c);
      s.radial_velocity = 0.0;
      scene.push_back(s);
    }
    const auto p = process_frame(synthesize_frame(c, scene, kInf, 0), c, PipelineParams{});
    CHECK(max_pixel(p.drai) == 0.0f);
    CHECK(max_pixel(p.srai) > 0.0f);
  }
}

TEST_CASE("mover at 0.7 m, 30 degrees, 0.5 m/s peaks at (15, 24)") {
  const auto c = default_config();
  const auto p = process_frame(synthesize_frame(c, {{0.7, 30 * kDeg, 0.5, 1.0}}, kInf, 0), c,
                               PipelineParams{});
  const auto [r, a] = peak_of(p.drai);
  CHECK(r == 15);
  CHECK(a == 24);
}

TEST_CASE("a mover whose Doppler power falls below the threshold is excluded") {
  const auto c = default_config();
  const PipelineParams params;
  // Both on exact bins so no leakage blurs the Doppler power.
  const Scatterer strong{0.47, 0.0, 0.39, 1.0};
  const auto weak_frame = process_frame(
      synthesize_frame(c, {strong, {0.94, 0.0, -0.39, 0.1}}, kInf, 0), c, params);
  CHECK(row_max(weak_frame.drai, 10) > 0.0f);
  CHECK(row_max(weak_frame.drai, 20) < 1e-6f * max_pixel(weak_frame.drai));
  const auto loud_frame = process_frame(
      synthesize_frame(c, {strong, {0.94, 0.0, -0.39, 0.5}}, kInf, 0), c, params);
  CHECK(row_max(loud_frame.drai, 20) > 0.1f * max_pixel(loud_frame.drai));
}

TEST_CASE("static suppression zeroes the Doppler power within tau of center") {
  const auto c = default_config();
  gen::Gen g(2);
  const auto rdis = range_doppler(synthesize_frame(c, {g.scatterer(c), g.scatterer(c)}, 10.0, 3), c);
  for (int tau : {0, 2, 5}) {
    PipelineParams p;
    p.doppler_bin_threshold = tau;
    const auto dp = doppler_power(rdis, p);
    for (int d = 64 - tau; d <= 64 + tau; ++d) CHECK(dp[d] == 0.0);
    CHECK(dp[64 + tau + 1] > 0.0);
    CHECK(dp[64 - tau - 1] > 0.0);
  }
}

TEST_CASE("raising alpha never enlarges the accumulated bin set") {
  const auto c = default_config();
  gen::Gen g(8);
  for (int trial = 0; trial < 4; ++trial) {
    const auto rdis = range_doppler(
        synthesize_frame(c, {g.scatterer(c), g.scatterer(c), g.scatterer(c)}, 12.0, trial), c);
    PipelineParams p;
    const auto dp = doppler_power(rdis, p);
    const double peak = *std::max_element(dp.begin(), dp.end());
    std::size_t last_count = dp.size() + 1;
    double last_energy = std::numeric_limits<double>::infinity();
    for (double alpha : {0.05, 0.1, 0.25, 0.5, 0.75, 0.95}) {
      p.power_threshold_factor = alpha;
      const auto count = static_cast<std::size_t>(
          std::count_if(dp.begin(), dp.end(), [&](double v) { return v > alpha * peak; }));
      CHECK(count <= last_count);
      last_count = count;
      const double energy = noise_eliminate(rdis, p, c).energy();
      CHECK(energy <= last_energy);
      last_energy = energy;
    }
  }
}

TEST_CASE("noise elimination matches the triple-loop reference") {
  const auto c = default_config();
  gen::Gen g(21);
  for (int trial = 0; trial < 3; ++trial) {
    ScattererSet scene{g.scatterer(c), g.scatterer(c)};
    const auto cube = synthesize_frame(c, scene, g.real(5.0, 25.0), static_cast<std::uint64_t>(trial));
    const auto lib = process_frame(cube, c, PipelineParams{}).drai;
    CHECK(relative_gap(lib, oracle::drai_from_cube(cube, c, 2, 0.25)) < 1e-5);
  }
}

TEST_CASE("tensor route and direct route agree bit for bit") {
  const auto c = default_config();
  gen::Gen g(4);
  const auto rdis = range_doppler(synthesize_frame(c, {g.scatterer(c), g.scatterer(c)}, 10.0, 1), c);
  const auto direct = noise_eliminate(rdis, PipelineParams{}, c);
  const auto via_tensor = noise_eliminate(rdis, angle_fft(rdis, c), PipelineParams{});
  CHECK(direct.values == via_tensor.values);
}

TEST_CASE("DRAI pixels are finite, non-negative and deterministic") {
  const auto c = default_config();
  gen::Gen g(99);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cube = synthesize_frame(c, {g.scatterer(c), g.scatterer(c)}, 5.0, trial);
    const auto a = process_frame(cube, c, PipelineParams{});
    const auto b = process_frame(cube, c, PipelineParams{});
    CHECK(a.drai.values == b.drai.values);
    CHECK(a.srai.values == b.srai.values);
    for (float v : a.drai.values) CHECK((std::isfinite(v) && v >= 0.0f));
  }
}

TEST_CASE("static person at 0.6 m broadside peaks in the SRAI at (13, 16)") {
  const auto c = default_config();
  const auto p = process_frame(synthesize_frame(c, {{0.6, 0.0, 0.0, 1.0}}, kInf, 0), c, PipelineParams{});
  const auto [r, a] = peak_of(p.srai);
  CHECK(r == 13);
  CHECK(a == 16);
}

TEST_CASE("moving-only scene leaves the SRAI near the floor") {
  const auto c = default_config();
  const auto p = process_frame(synthesize_frame(c, {{0.47, 0.0, 0.39, 1.0}}, kInf, 0), c, PipelineParams{});
  CHECK(max_pixel(p.srai) < 1e-6f * max_pixel(p.drai));
}

TEST_CASE("two static targets give two SRAI peaks") {
  const auto c = default_config();
  const auto p = process_frame(
      synthesize_frame(c, {{0.47, 0.0, 0.0, 1.0}, {0.94, 30 * kDeg, 0.0, 1.0}}, kInf, 0), c,
      PipelineParams{});
  CHECK(p.srai.at(10, 16) > 0.9f * max_pixel(p.srai));
  CHECK(p.srai.at(20, 24) > 0.9f * max_pixel(p.srai));
}

TEST_CASE("Hann window keeps the peak location") {
  const auto c = default_config();
  PipelineParams p;
  p.window = WindowKind::kHann;
  CHECK_NOTHROW(p.validate(c));
  const auto f = process_frame(synthesize_frame(c, {{0.7, 30 * kDeg, 0.5, 1.0}}, kInf, 0), c, p);
  const auto [r, a] = peak_of(f.drai);
  CHECK(r == 15);
  CHECK(a == 24);
}

TEST_CASE("pipeline parameter validation") {
  const auto c = default_config();
  PipelineParams p;
  CHECK_NOTHROW(p.validate(c));
  p.doppler_bin_threshold = 64;
  CHECK_THROWS_AS(p.validate(c), ValidationError);
  p = {};
  p.power_threshold_factor = 1.0;
  CHECK_THROWS_AS(p.validate(c), ValidationError);
  p.power_threshold_factor = 0.0;
  CHECK_THROWS_AS(p.validate(c), ValidationError);
}
