#include "mmgesture/augmentation.hpp"

#include <cmath>
#include <random>
#include <string>

namespace mmg {
namespace {

double frame_spacing(const DraiSequence& seq) {
  if (seq.frames.size() >= 2) {
    const double dt = seq.frames[1].timestamp - seq.frames[0].timestamp;
    if (dt > 0.0) return dt;
  }
  return 0.05;
}

void renumber(DraiSequence& seq, double dt, double t0) {
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    seq.frames[i].frame_index = static_cast<std::int64_t>(i);
    seq.frames[i].timestamp = t0 + dt * static_cast<double>(i);
  }
}

DraiFrame shift_frame(const DraiFrame& in, int dr, int da) {
  DraiFrame out(in.range_bins, in.angle_bins);
  out.frame_index = in.frame_index;
  out.timestamp = in.timestamp;
  const auto rows = static_cast<int>(in.range_bins);
  const auto cols = static_cast<int>(in.angle_bins);
  for (int r = 0; r < rows; ++r) {
    const int src_r = r - dr;
    if (src_r < 0 || src_r >= rows) continue;
    for (int a = 0; a < cols; ++a) {
      const int src_a = a - da;
      if (src_a < 0 || src_a >= cols) continue;
      out.at(static_cast<std::size_t>(r), static_cast<std::size_t>(a)) =
          in.at(static_cast<std::size_t>(src_r), static_cast<std::size_t>(src_a));
    }
  }
  return out;
}

double sequence_energy(const DraiSequence& seq) {
  double e = 0.0;
  for (const auto& f : seq.frames) e += f.energy();
  return e;
}

// Energy kept after shifting every frame by (dr, da), without building frames.
double retained_energy(const DraiSequence& seq, int dr, int da) {
  double e = 0.0;
  for (const auto& f : seq.frames) {
    const auto rows = static_cast<int>(f.range_bins);
    const auto cols = static_cast<int>(f.angle_bins);
    const int r0 = std::max(0, -dr);
    const int r1 = std::min(rows, rows - dr);
    const int a0 = std::max(0, -da);
    const int a1 = std::min(cols, cols - da);
    for (int r = r0; r < r1; ++r) {
      for (int a = a0; a < a1; ++a) e += f.at(static_cast<std::size_t>(r), static_cast<std::size_t>(a));
    }
  }
  return e;
}

bool has_empty_frame(const DraiSequence& seq) {
  for (const auto& f : seq.frames) {
    if (f.values.empty() || f.values[f.argmax()] <= 0.0f) return true;
  }
  return false;
}

}  // namespace

void AugmentPolicy::validate() const {
  auto fail = [](const std::string& what) { throw ValidationError("augment policy: " + what); };
  if (delta_x_min > delta_x_max || delta_y_min > delta_y_max) fail("empty translation range");
  if (interval_min < 2 || interval_min > interval_max) fail("interval range must satisfy 2 <= min <= max");
  if (rotation_min > rotation_max) fail("empty rotation range");
  if (!(scale_min > 0.0) || scale_min > scale_max) fail("scale range must be positive");
  if (!(power_45_min > 0.0) || power_45_min > power_45_max) fail("bad 45-degree power range");
  if (!(power_60_min > 0.0) || power_60_min > power_60_max) fail("bad 60-degree power range");
  for (double p : {p_translate, p_speed, p_reverse, p_geometric, p_power}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities must lie in [0, 1]");
  }
  if (variants_per_input < 0) fail("variants_per_input must be >= 0");
  if (!(min_energy_retention >= 0.0 && min_energy_retention <= 1.0)) {
    fail("min_energy_retention must lie in [0, 1]");
  }
  if (max_redraws < 0) fail("max_redraws must be >= 0");
}

DraiSequence translate(const DraiSequence& seq, int delta_range, int delta_angle) {
  DraiSequence out;
  out.label = seq.label;
  out.angle_tag = seq.angle_tag;
  out.frames.reserve(seq.frames.size());
  for (const auto& f : seq.frames) out.frames.push_back(shift_frame(f, delta_range, delta_angle));
  return out;
}

DraiSequence resample_speed(const DraiSequence& seq, int interval, ResampleMode mode, int phase) {
  const auto T = static_cast<int>(seq.frames.size());
  if (interval < 2) throw ValidationError("resample interval must be >= 2");
  if (T <= interval) {
    throw ValidationError("sequence of " + std::to_string(T) + " frames too short for interval " +
                          std::to_string(interval));
  }
  if (phase == 0) phase = interval;
  if (phase < 1 || phase > interval) throw ValidationError("resample phase must lie in [1, interval]");
  check_uniform_shape(seq);

  auto hit = [&](int j) { return j >= phase && (j - phase) % interval == 0; };
  DraiSequence out;
  out.label = seq.label;
  out.angle_tag = seq.angle_tag;
  for (int j = 1; j <= T; ++j) {
    const auto& f = seq.frames[static_cast<std::size_t>(j - 1)];
    if (mode == ResampleMode::kRemove) {
      if (!hit(j)) out.frames.push_back(f);
      continue;
    }
    out.frames.push_back(f);
    if (hit(j) && j < T) {
      const auto& next = seq.frames[static_cast<std::size_t>(j)];
      DraiFrame mid(f.range_bins, f.angle_bins);
      for (std::size_t i = 0; i < mid.values.size(); ++i) {
        mid.values[i] = 0.5f * f.values[i] + 0.5f * next.values[i];
      }
      out.frames.push_back(std::move(mid));
    }
  }
  renumber(out, frame_spacing(seq), seq.frames.front().timestamp);
  return out;
}

DraiSequence reverse_sequence(const DraiSequence& seq) {
  if (!seq.label) throw ValidationError("cannot reverse an unlabeled sequence");
  DraiSequence out;
  out.label = paired_gesture(*seq.label);
  out.angle_tag = seq.angle_tag;
  out.frames.assign(seq.frames.rbegin(), seq.frames.rend());
  for (std::size_t i = 0; i < out.frames.size(); ++i) {
    out.frames[i].frame_index = seq.frames[i].frame_index;
    out.frames[i].timestamp = seq.frames[i].timestamp;
  }
  return out;
}

DraiSequence reduce_antennas(const ChannelArchive& archive, int n_channels,
                             const RadarConfig& config, const PipelineParams& params) {
  if (archive.empty()) throw ValidationError("per-channel range-Doppler archive unavailable");
  if (n_channels < 2 || n_channels > config.rx_channels) {
    throw ValidationError("antenna count must lie in [2, " + std::to_string(config.rx_channels) + "]");
  }
  RadarConfig reduced = config;
  reduced.rx_channels = n_channels;
  DraiSequence out;
  out.frames.reserve(archive.size());
  for (std::size_t t = 0; t < archive.size(); ++t) {
    const auto& channels = archive[t];
    if (static_cast<int>(channels.size()) < n_channels) {
      throw ValidationError("archived frame holds fewer channels than requested");
    }
    std::span<const RangeDopplerImage> subset(channels.data(), static_cast<std::size_t>(n_channels));
    DraiFrame f = noise_eliminate(subset, params, reduced);
    f.frame_index = static_cast<std::int64_t>(t);
    f.timestamp = static_cast<double>(t) * config.frame_period;
    out.frames.push_back(std::move(f));
  }
  return out;
}

DraiSequence scale_power(const DraiSequence& seq, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("power scale factor must be positive");
  DraiSequence out = seq;
  const auto a = static_cast<float>(alpha);
  for (auto& f : out.frames) {
    for (auto& v : f.values) v *= a;
  }
  return out;
}

TrajectoryProfile extract_trajectory_profile(const DraiSequence& seq) {
  TrajectoryProfile p;
  p.points.reserve(seq.frames.size());
  for (const auto& f : seq.frames) {
    if (f.values.empty()) throw ValidationError("empty DRAI frame");
    const std::size_t idx = f.argmax();
    if (!(f.values[idx] > 0.0f)) {
      throw ValidationError("frame " + std::to_string(f.frame_index) + " has no nonzero pixel");
    }
    p.points.push_back({static_cast<double>(idx % f.angle_bins) + 1.0,
                        static_cast<double>(idx / f.angle_bins) + 1.0});
  }
  return p;
}

TrajectoryProfile transform_profile(const TrajectoryProfile& profile, double beta, double gamma_x,
                                    double gamma_y) {
  if (profile.points.empty()) throw ValidationError("empty trajectory profile");
  const auto& pts = profile.points;

  // Rotating center: the point farthest from the origin, earliest on ties.
  std::size_t far = 0;
  double far_sq = pts[0].x * pts[0].x + pts[0].y * pts[0].y;
  for (std::size_t t = 1; t < pts.size(); ++t) {
    const double sq = pts[t].x * pts[t].x + pts[t].y * pts[t].y;
    if (sq > far_sq) {
      far_sq = sq;
      far = t;
    }
  }
  const double rx = pts[far].x;
  const double ry = pts[far].y;

  // Scaling center: centroid of the original profile.
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  sx /= static_cast<double>(pts.size());
  sy /= static_cast<double>(pts.size());

  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const double tx = rx * (1.0 - c) + ry * s;
  const double ty = ry * (1.0 - c) - rx * s;

  TrajectoryProfile out;
  out.points.reserve(pts.size());
  for (const auto& p : pts) {
    const double xr = c * p.x - s * p.y + tx;
    const double yr = s * p.x + c * p.y + ty;
    out.points.push_back({gamma_x * xr + sx * (1.0 - gamma_x), gamma_y * yr + sy * (1.0 - gamma_y)});
  }
  return out;
}

DraiSequence apply_profile_offsets(const DraiSequence& seq, const TrajectoryProfile& original,
                                   const TrajectoryProfile& transformed) {
  if (original.size() != seq.frames.size() || transformed.size() != seq.frames.size()) {
    throw ValidationError("trajectory profile length does not match the sequence");
  }
  DraiSequence out;
  out.label = seq.label;
  out.angle_tag = seq.angle_tag;
  out.frames.reserve(seq.frames.size());
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const int da = static_cast<int>(std::lround(transformed.points[t].x - original.points[t].x));
    const int dr = static_cast<int>(std::lround(transformed.points[t].y - original.points[t].y));
    out.frames.push_back(shift_frame(seq.frames[t], dr, da));
  }
  return out;
}

std::vector<DraiSequence> augment_batch(std::span<const DraiSequence> dataset,
                                        const AugmentPolicy& policy, std::uint64_t seed) {
  policy.validate();
  std::vector<DraiSequence> out;
  out.reserve(dataset.size() * static_cast<std::size_t>(policy.variants_per_input));

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const DraiSequence& source = dataset[i];
    std::mt19937_64 rng(mix_seed(seed, i));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto draw_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto draw_real = [&](double lo, double hi) {
      return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
    };

    for (int v = 0; v < policy.variants_per_input; ++v) {
      DraiSequence s = source;

      if (coin(rng) < policy.p_reverse && s.label && is_predefined_gesture(*s.label)) {
        s = reverse_sequence(s);
      }
      if (coin(rng) < policy.p_speed) {
        const int k = draw_int(policy.interval_min, policy.interval_max);
        const auto mode = coin(rng) < 0.5 ? ResampleMode::kInsert : ResampleMode::kRemove;
        const int phase = policy.randomize_resample_phase ? draw_int(1, k) : k;
        if (static_cast<int>(s.frames.size()) > k) s = resample_speed(s, k, mode, phase);
      }
      if (coin(rng) < policy.p_geometric) {
        const double beta = draw_real(policy.rotation_min, policy.rotation_max);
        const double gx = draw_real(policy.scale_min, policy.scale_max);
        const double gy = draw_real(policy.scale_min, policy.scale_max);
        if (!s.frames.empty() && !has_empty_frame(s)) {
          const auto profile = extract_trajectory_profile(s);
          s = apply_profile_offsets(s, profile, transform_profile(profile, beta, gx, gy));
        }
      }
      if (coin(rng) < policy.p_translate) {
        const double total = sequence_energy(s);
        for (int attempt = 0; attempt <= policy.max_redraws; ++attempt) {
          const int dx = draw_int(policy.delta_x_min, policy.delta_x_max);
          const int dy = draw_int(policy.delta_y_min, policy.delta_y_max);
          const int dr = policy.swap_translation_axes ? dy : dx;
          const int da = policy.swap_translation_axes ? dx : dy;
          if (total <= 0.0 || retained_energy(s, dr, da) >= policy.min_energy_retention * total) {
            s = translate(s, dr, da);
            break;
          }
        }
      }
      if (coin(rng) < policy.p_power) {
        const bool sixty = coin(rng) < 0.5;
        const double alpha = sixty ? draw_real(policy.power_60_min, policy.power_60_max)
                                   : draw_real(policy.power_45_min, policy.power_45_max);
        s = scale_power(s, alpha);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace mmg
