#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "mmgesture/radar_front.hpp"
#include "oracles.hpp"

using namespace mmg;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Index of the largest |X| in a vector.
template <class V>
std::size_t argmax_abs(const V& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  return best;
}

std::vector<oracle::cd> fast_time(const AdcCube& c, int chirp, int channel) {
  std::vector<oracle::cd> x(static_cast<std::size_t>(c.samples));
  for (int n = 0; n < c.samples; ++n) x[n] = oracle::cd(c.at(chirp, n, channel));
  return x;
}

std::vector<oracle::cd> slow_time(const AdcCube& c, int sample, int channel) {
  std::vector<oracle::cd> x(static_cast<std::size_t>(c.chirps));
  for (int m = 0; m < c.chirps; ++m) x[m] = oracle::cd(c.at(m, sample, channel));
  return x;
}

std::vector<oracle::cd> across_channels(const AdcCube& c, int chirp, int sample, int fft_size) {
  std::vector<oracle::cd> x(static_cast<std::size_t>(fft_size), 0.0);
  for (int k = 0; k < c.channels; ++k) x[k] = oracle::cd(c.at(chirp, sample, k));
  return x;
}

}  // namespace

TEST_CASE("default configuration reproduces the reference resolutions") {
  const auto c = default_config();
  CHECK_NOTHROW(c.validate());
  CHECK(c.range_resolution() == doctest::Approx(0.047).epsilon(1e-12));
  CHECK(c.velocity_resolution() == doctest::Approx(0.039).epsilon(1e-12));
  CHECK(c.kept_range_bins * c.range_resolution() == doctest::Approx(1.504).epsilon(1e-12));
  CHECK(c.frame_rate() == doctest::Approx(20.0));
  CHECK(c.chirps_per_frame == 128);
  CHECK(c.samples_per_chirp == 128);
  CHECK(c.kept_range_bins == 32);
  CHECK(c.angle_fft_size == 32);
  CHECK(c.rx_channels == 8);
  CHECK(c.element_spacing == doctest::Approx(c.wavelength / 2.0));
  // lambda / (2 L Tc) evaluated from the raw constants.
  CHECK(c.wavelength / (2.0 * c.chirps_per_frame * c.chirp_interval) ==
        doctest::Approx(0.039).epsilon(1e-12));
  CHECK(c.chirps_per_frame * c.chirp_interval == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("angular resolution at broadside is about 14.3 degrees for eight channels") {
  const auto c = default_config();
  CHECK(c.angular_resolution(8, 0.0) == doctest::Approx(0.25));
  CHECK(c.angular_resolution(8, 0.0) / kDeg == doctest::Approx(14.32).epsilon(1e-3));
  CHECK(c.angular_resolution(4, 0.0) / kDeg == doctest::Approx(28.65).epsilon(1e-3));
  CHECK(c.angular_resolution(8, 60 * kDeg) == doctest::Approx(0.5));
}

TEST_CASE("configuration validation rejects non-physical settings") {
  auto c = default_config();
  c.element_spacing = c.wavelength;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = default_config();
  c.kept_range_bins = 256;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = default_config();
  c.angle_fft_size = 4;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = default_config();
  c.chirp_slope = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("scatterer validation") {
  const auto c = default_config();
  CHECK_NOTHROW(validate_scatterer({0.5, 0.2, 0.3, 1.0}, c));
  CHECK_THROWS_AS(validate_scatterer({0.0, 0.0, 0.0, 1.0}, c), ValidationError);
  CHECK_THROWS_AS(validate_scatterer({1.6, 0.0, 0.0, 1.0}, c), ValidationError);
  CHECK_THROWS_AS(validate_scatterer({0.5, 1.6, 0.0, 1.0}, c), ValidationError);
  CHECK_THROWS_AS(validate_scatterer({0.5, 0.0, 100.0, 1.0}, c), ValidationError);
  CHECK_THROWS_AS(validate_scatterer({0.5, 0.0, 0.0, -1.0}, c), ValidationError);
}

TEST_CASE("empty scene without noise is an all-zero cube") {
  const auto c = default_config();
  const auto cube = synthesize_frame(c, {}, kInf, 1);
  CHECK(cube.matches(c));
  CHECK(std::all_of(cube.data.begin(), cube.data.end(),
                    [](auto v) { return v == std::complex<float>(0.0f, 0.0f); }));
}

TEST_CASE("scatterer at 0.47 m peaks at range bin 10 on every channel") {
  const auto c = default_config();
  const auto cube = synthesize_frame(c, {{0.47, 0.0, 0.0, 1.0}}, kInf, 1);
  for (int k = 0; k < c.rx_channels; ++k) {
    for (int m : {0, 37, 127}) {
      const auto X = oracle::dft(fast_time(cube, m, k));
      CHECK(argmax_abs(X) == 10);
    }
  }
}

TEST_CASE("scatterer at 0.39 m/s peaks 10 Doppler bins from zero frequency") {
  const auto c = default_config();
  const auto cube = synthesize_frame(c, {{0.47, 0.0, 0.39, 1.0}}, kInf, 1);
  for (int k = 0; k < c.rx_channels; ++k) {
    const auto X = oracle::centered_dft(slow_time(cube, 0, k));
    CHECK(argmax_abs(X) == static_cast<std::size_t>(c.chirps_per_frame / 2 + 10));
  }
  const auto approaching = synthesize_frame(c, {{0.47, 0.0, -0.39, 1.0}}, kInf, 1);
  const auto Y = oracle::centered_dft(slow_time(approaching, 0, 0));
  CHECK(argmax_abs(Y) == static_cast<std::size_t>(c.chirps_per_frame / 2 - 10));
}

TEST_CASE("azimuth maps to the sin-space angle bin") {
  const auto c = default_config();
  for (double deg : {0.0, 30.0, -30.0}) {
    const auto cube = synthesize_frame(c, {{0.5, deg * kDeg, 0.0, 1.0}}, kInf, 1);
    const auto X = oracle::centered_dft(across_channels(cube, 0, 0, c.angle_fft_size));
    CHECK(static_cast<double>(argmax_abs(X)) ==
          doctest::Approx(16.0 + 16.0 * std::sin(deg * kDeg)));
  }
}

TEST_CASE("independent transforms recover the closed-form bins of random scatterers") {
  const auto c = default_config();
  gen::Gen g(17);
  int hits = 0;
  const int trials = 25;
  for (int trial = 0; trial < trials; ++trial) {
    const Scatterer s = g.scatterer(c);
    const auto cube = synthesize_frame(c, {s}, kInf, static_cast<std::uint64_t>(trial));
    const auto expect = oracle::expected_bins(s, c);
    std::vector<std::vector<std::vector<oracle::cd>>> all;
    for (int k = 0; k < c.rx_channels; ++k) all.push_back(oracle::range_doppler(cube, k, c.kept_range_bins));
    const auto& rd = all[0];
    std::size_t br = 0, bd = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < rd.size(); ++r) {
      for (std::size_t d = 0; d < rd[r].size(); ++d) {
        if (std::abs(rd[r][d]) > best) {
          best = std::abs(rd[r][d]);
          br = r;
          bd = d;
        }
      }
    }
    std::vector<oracle::cd> ch(static_cast<std::size_t>(c.angle_fft_size), 0.0);
    for (int k = 0; k < c.rx_channels; ++k) ch[k] = all[k][br][bd];
    const auto ba = argmax_abs(oracle::centered_dft(ch));
    const bool ok = std::abs(static_cast<double>(br) - expect.range) <= 1.0 &&
                    std::abs(static_cast<double>(bd) - expect.doppler) <= 1.0 &&
                    std::abs(static_cast<double>(ba) - expect.angle) <= 1.0;
    hits += ok ? 1 : 0;
  }
  CHECK(hits == trials);
}

TEST_CASE("synthesis is linear without noise") {
  const auto c = default_config();
  gen::Gen g(3);
  const ScattererSet a{g.scatterer(c), g.scatterer(c)};
  const ScattererSet b{g.scatterer(c)};
  ScattererSet ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto ca = synthesize_frame(c, a, kInf, 0);
  const auto cb = synthesize_frame(c, b, kInf, 0);
  const auto cab = synthesize_frame(c, ab, kInf, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < cab.data.size(); ++i) {
    worst = std::max(worst, static_cast<double>(std::abs(cab.data[i] - (ca.data[i] + cb.data[i]))));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("synthesis is reproducible for a fixed seed") {
  const auto c = default_config();
  const ScattererSet s{{0.6, 0.1, 0.2, 1.0}};
  const auto x = synthesize_frame(c, s, 10.0, 42);
  const auto y = synthesize_frame(c, s, 10.0, 42);
  const auto z = synthesize_frame(c, s, 10.0, 43);
  CHECK(x.data == y.data);
  CHECK(x.data != z.data);
  CHECK(frame_seed(5, 1) == frame_seed(5, 1));
  CHECK(frame_seed(5, 1) != frame_seed(5, 2));
}

TEST_CASE("noise power follows the requested SNR") {
  const auto c = default_config();
  const auto clean = synthesize_frame(c, {{0.6, 0.0, 0.3, 2.0}}, kInf, 0);
  const auto noisy = synthesize_frame(c, {{0.6, 0.0, 0.3, 2.0}}, 10.0, 0);
  double p = 0.0;
  for (std::size_t i = 0; i < clean.data.size(); ++i) p += std::norm(noisy.data[i] - clean.data[i]);
  p /= static_cast<double>(clean.data.size());
  CHECK(p == doctest::Approx(0.4).epsilon(0.02));  // 4 / 10^(10/10)
}

TEST_CASE("push approaches the radar monotonically at constant azimuth") {
  const auto c = default_config();
  GestureScript s;
  s.kind = GestureKind::kPush;
  s.anchor_distance = 0.8;
  s.duration = 1.0;
  const auto track = gesture_trajectory(s, c);
  REQUIRE(track.size() == 20);
  CHECK(track.front()[0].range == doctest::Approx(0.8));
  CHECK(track.back()[0].range == doctest::Approx(0.55).epsilon(0.05));
  for (std::size_t f = 1; f < track.size(); ++f) {
    CHECK(track[f][0].range < track[f - 1][0].range);
    CHECK(std::abs(track[f][0].azimuth) < 1e-9);
    CHECK(track[f - 1][0].radial_velocity < 0.0);
  }
  GestureScript pull = s;
  pull.kind = GestureKind::kPull;
  const auto back = gesture_trajectory(pull, c);
  for (std::size_t f = 1; f < back.size(); ++f) CHECK(back[f][0].range > back[f - 1][0].range);
}

TEST_CASE("doubling speed halves the frames in motion") {
  const auto c = default_config();
  GestureScript s;
  s.kind = GestureKind::kPush;
  auto moving = [&](const GestureScript& script) {
    int n = 0;
    for (const auto& set : gesture_trajectory(script, c)) n += set[0].radial_velocity != 0.0;
    return n;
  };
  GestureScript fast = s;
  fast.speed_scale = 2.0;
  s.duration = 1.0;
  fast.duration = 1.0;
  CHECK(moving(s) == 20);
  CHECK(moving(fast) == 10);
}

TEST_CASE("left and right swipes produce time-reversed azimuth tracks") {
  const auto c = default_config();
  GestureScript ls;
  ls.kind = GestureKind::kLeftSwipe;
  ls.duration = 1.0;
  GestureScript rs = ls;
  rs.kind = GestureKind::kRightSwipe;
  const auto a = gesture_trajectory(ls, c);
  const auto b = gesture_trajectory(rs, c);
  const std::size_t n = a.size();
  for (std::size_t f = 1; f < n; ++f) {
    CHECK(a[f][0].azimuth == doctest::Approx(b[n - f][0].azimuth).epsilon(1e-9));
    CHECK(a[f][0].azimuth < a[f - 1][0].azimuth);
  }
}

TEST_CASE("circles stay near a fixed radius in the range/cross-range plane") {
  const auto c = default_config();
  for (auto kind : {GestureKind::kClockwise, GestureKind::kAnticlockwise}) {
    GestureScript s;
    s.kind = kind;
    s.duration = 1.2;
    // Palm circles a center 0.12 m in front of the 0.8 m anchor.
    for (const auto& set : gesture_trajectory(s, c)) {
      const double x = set[0].range * std::sin(set[0].azimuth);
      const double y = set[0].range * std::cos(set[0].azimuth);
      CHECK(std::hypot(x, y - 0.68) == doctest::Approx(0.1).epsilon(1e-9));
    }
  }
}

TEST_CASE("scripts leaving the range gate or too short are rejected") {
  const auto c = default_config();
  GestureScript far;
  far.kind = GestureKind::kPull;
  far.anchor_distance = 1.49;
  CHECK_THROWS_AS(gesture_trajectory(far, c), ValidationError);
  GestureScript brief;
  brief.duration = 0.1;
  CHECK_THROWS_AS(gesture_trajectory(brief, c), ValidationError);
  GestureScript slow;
  slow.speed_scale = 0.0;
  CHECK_THROWS_AS(gesture_trajectory(slow, c), ValidationError);
}

TEST_CASE("negative motions and clutter are carried in every frame") {
  const auto c = default_config();
  for (int m = 0; m < kNumNegativeMotions; ++m) {
    GestureScript s;
    s.kind = GestureKind::kNegative;
    s.negative_motion = static_cast<NegativeMotion>(m);
    s.clutter = {{1.2, 0.3, 0.0, 2.0}};
    const auto track = gesture_trajectory(s, c);
    for (const auto& set : track) {
      REQUIRE(set.size() == static_cast<std::size_t>(hand_scatterer_count(s)) + 1);
      CHECK(set.back().range == 1.2);
    }
  }
}
