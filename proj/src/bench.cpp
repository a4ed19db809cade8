#include "mmgesture/bench.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "mmgesture/classifier.hpp"
#include "mmgesture/stream_runner.hpp"

namespace mmg {
namespace {

using Clock = std::chrono::steady_clock;

double ms(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

StageTiming timing(std::string name, std::vector<double> samples) {
  const auto s = summarize_latency(std::move(samples));
  return {std::move(name), s.mean_ms, s.p99_ms};
}

}  // namespace

BenchReport bench_pipeline(const RadarConfig& config, const PipelineParams& params, int trials,
                           std::uint64_t seed) {
  if (trials < 100) throw ValidationError("bench needs at least 100 trials");
  config.validate();
  params.validate(config);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> range(0.2, config.max_range() * 0.9);
  std::uniform_real_distribution<double> angle(-0.8, 0.8);
  std::uniform_real_distribution<double> vel(-0.8, 0.8);
  std::vector<AdcCube> cubes;
  for (int i = 0; i < 8; ++i) {
    ScattererSet s{{range(rng), angle(rng), vel(rng), 1.0}, {range(rng), angle(rng), 0.0, 2.0}};
    cubes.push_back(synthesize_frame(config, s, 20.0, mix_seed(seed, static_cast<std::uint64_t>(i))));
  }

  BenchReport rep;
  rep.trials = trials;
  std::vector<double> rd_ms, ang_ms, ne_ms, total_ms;
  for (int t = 0; t < trials; ++t) {
    const auto& cube = cubes[static_cast<std::size_t>(t) % cubes.size()];
    const auto t0 = Clock::now();
    const auto rdis = range_doppler(cube, config, params.window);
    const auto t1 = Clock::now();
    const auto rda = angle_fft(rdis, config);
    const auto t2 = Clock::now();
    const auto drai = noise_eliminate(rdis, rda, params);
    const auto t3 = Clock::now();
    rd_ms.push_back(ms(t0, t1));
    ang_ms.push_back(ms(t1, t2));
    ne_ms.push_back(ms(t2, t3));
    total_ms.push_back(ms(t0, t3));
  }
  rep.signal_stages.push_back(timing("range_doppler", rd_ms));
  rep.signal_stages.push_back(timing("angle_fft", ang_ms));
  rep.signal_stages.push_back(timing("noise_elimination", ne_ms));
  rep.signal_total_mean_ms = summarize_latency(total_ms).mean_ms;

  // 20-frame input with a moving blob.
  DraiSequence seq;
  const auto rows = static_cast<std::size_t>(config.kept_range_bins);
  const auto cols = static_cast<std::size_t>(config.angle_fft_size);
  for (std::size_t f = 0; f < 20; ++f) {
    DraiFrame fr(rows, cols);
    for (std::size_t i = 0; i < fr.values.size(); ++i) {
      fr.values[i] = static_cast<float>(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    }
    fr.at((f + 4) % rows, cols / 2) += 20.0f;
    seq.frames.push_back(std::move(fr));
  }
  for (const auto& [name, base] : {std::pair{"inference_lite", ModelConfig::lite()},
                                   std::pair{"inference_full", ModelConfig::full()}}) {
    ModelConfig mc = base;
    mc.input_rows = static_cast<int>(rows);
    mc.input_cols = static_cast<int>(cols);
    mc.input_scale = 1.0;
    const Model model = Model::initialize(mc, seed);
    std::vector<double> samples;
    for (int t = 0; t < trials; ++t) {
      const auto t0 = Clock::now();
      const auto logits = forward(model, seq);
      samples.push_back(ms(t0, Clock::now()));
      if (logits.empty()) throw std::logic_error("empty logits");
    }
    rep.inference.push_back(timing(name, samples));
  }
  return rep;
}

std::string format_bench(const BenchReport& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "trials: " << r.trials << "\n";
  os << "stage                 mean_ms   p99_ms\n";
  double sum = 0.0;
  for (const auto& s : r.signal_stages) {
    os << s.stage << std::string(22 - s.stage.size(), ' ') << s.mean_ms << "   " << s.p99_ms << "\n";
    sum += s.mean_ms;
  }
  os << "sum of stage means    " << sum << "\n";
  os << "measured total        " << r.signal_total_mean_ms << "\n";
  for (const auto& s : r.inference) {
    os << s.stage << std::string(22 - s.stage.size(), ' ') << s.mean_ms << "   " << s.p99_ms << "\n";
  }
  return os.str();
}

}  // namespace mmg
