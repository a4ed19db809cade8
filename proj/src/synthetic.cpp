#include "mmgesture/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "mmgesture/augmentation.hpp"

namespace mmg {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Hand resting at the anchor: the palm, finger and wrist points of a push at
// progress zero, all static.
ScattererSet resting_hand(const AnchorLocation& where, const RadarConfig& config) {
  GestureScript s;
  s.kind = GestureKind::kPush;
  s.anchor_distance = where.distance;
  s.anchor_angle = where.angle;
  s.duration = 4.0 * config.frame_period;
  auto frames = gesture_trajectory(s, config);
  ScattererSet hand(frames.front().begin(), frames.front().begin() + hand_scatterer_count(s));
  for (auto& p : hand) p.radial_velocity = 0.0;
  return hand;
}

}  // namespace

DraiFrame masked_drai(const FrameProducts& products, const SceneOptions& scene) {
  if (!scene.roi_mask) return products.drai;
  const auto targets = detect_static_targets(products.srai, scene.detection);
  if (targets.empty()) return products.drai;
  const auto roi = select_user_roi(targets, scene.roi, products.srai.range_bins,
                                   products.srai.angle_bins);
  return mask_to_roi(products.drai, roi);
}

SynthesizedSequence synthesize_sequence(const GestureScript& script, const RadarConfig& config,
                                        const PipelineParams& params, const SceneOptions& scene,
                                        std::uint64_t seed, bool keep_archive) {
  GestureScript s = script;
  if (scene.include_body) {
    const auto body = user_body(s.anchor_distance, s.anchor_angle);
    s.clutter.insert(s.clutter.end(), body.begin(), body.end());
  }
  const auto scenes = gesture_trajectory(s, config);
  SynthesizedSequence out;
  out.drai.label = s.kind;
  out.drai.angle_tag = s.anchor_angle;
  for (std::size_t f = 0; f < scenes.size(); ++f) {
    auto cube = synthesize_frame(config, scenes[f], s.noise_snr_db,
                                 frame_seed(seed, static_cast<std::int64_t>(f)));
    cube.frame_index = static_cast<std::int64_t>(f);
    auto products = process_frame(cube, config, params);
    DraiFrame frame = masked_drai(products, scene);
    frame.frame_index = static_cast<std::int64_t>(f);
    frame.timestamp = static_cast<double>(f) * config.frame_period;
    out.drai.frames.push_back(std::move(frame));
    if (keep_archive) out.archive.push_back(std::move(products.rdis));
  }
  return out;
}

std::vector<AnchorLocation> training_locations() {
  return {{"L1", 0.6, 0.0}, {"L2", 0.8, 0.0}, {"L3", 0.95, 0.0}, {"L4", 0.8, -30.0 * kDeg}};
}

std::vector<AnchorLocation> held_out_locations() { return {{"L5", 0.8, 30.0 * kDeg}}; }

GestureScript random_script(GestureKind kind, const AnchorLocation& where,
                            const ScriptVariation& v, std::mt19937_64& rng) {
  GestureScript s;
  s.kind = kind;
  s.anchor_distance = where.distance + uniform(rng, -v.distance_jitter, v.distance_jitter);
  s.anchor_angle = where.angle + uniform(rng, -v.angle_jitter, v.angle_jitter);
  s.duration = uniform(rng, v.duration_min, v.duration_max);
  s.extent_scale = uniform(rng, v.extent_min, v.extent_max);
  s.hand_reflectivity = uniform(rng, v.reflectivity_min, v.reflectivity_max);
  s.noise_snr_db = uniform(rng, v.snr_min_db, v.snr_max_db);
  s.negative_motion = static_cast<NegativeMotion>(
      std::uniform_int_distribution<int>(0, kNumNegativeMotions - 1)(rng));
  return s;
}

std::vector<DraiSequence> generate_dataset(const DatasetSpec& spec, const RadarConfig& config,
                                           const PipelineParams& params, const SceneOptions& scene) {
  if (spec.count < 0) throw ValidationError("dataset count must be >= 0");
  if (spec.count > 0 && spec.locations.empty()) throw ValidationError("dataset needs locations");
  const int classes = spec.include_negative ? kNumGestureClasses : kNumGestureClasses - 1;
  std::vector<DraiSequence> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    const auto& where = spec.locations[static_cast<std::size_t>(i / classes) % spec.locations.size()];
    std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(i)));
    const auto script = random_script(gesture_from_index(i % classes), where, spec.variation, rng);
    const std::uint64_t seed = mix_seed(spec.seed ^ 0x5EC0ULL, static_cast<std::uint64_t>(i));
    out.push_back(synthesize_sequence(script, config, params, scene, seed).drai);
  }
  return out;
}

SyntheticStream make_stream(const StreamScriptOptions& o, const RadarConfig& config) {
  if (o.gestures < 0 || o.gap_min < 0 || o.gap_max < o.gap_min || o.lead_in < 0 || o.tail < 0) {
    throw ValidationError("invalid stream script options");
  }
  SyntheticStream st;
  st.snr_db = o.snr_db;
  st.seed = o.seed;
  std::mt19937_64 rng(o.seed);
  const ScattererSet body = user_body(o.anchor.distance, o.anchor.angle);
  ScattererSet rest = resting_hand(o.anchor, config);
  rest.insert(rest.end(), body.begin(), body.end());
  auto add_static = [&](int n) {
    for (int i = 0; i < n; ++i) st.scenes.push_back(rest);
  };

  add_static(o.lead_in);
  const int gestures = o.static_only ? 0 : o.gestures;
  const int classes = o.include_negative ? kNumGestureClasses : kNumGestureClasses - 1;
  for (int g = 0; g < gestures; ++g) {
    const auto kind = gesture_from_index(std::uniform_int_distribution<int>(0, classes - 1)(rng));
    GestureScript s = random_script(kind, o.anchor, o.variation, rng);
    s.anchor_distance = o.anchor.distance;
    s.anchor_angle = o.anchor.angle;
    s.clutter = body;
    const auto frames = gesture_trajectory(s, config);
    const auto start = static_cast<std::int64_t>(st.scenes.size());
    const double rate = s.speed_scale / s.duration;
    std::int64_t last_moving = start;
    for (std::size_t f = 0; f < frames.size(); ++f) {
      if (rate * static_cast<double>(f) * config.frame_period < 1.0) {
        last_moving = start + static_cast<std::int64_t>(f);
      }
      st.scenes.push_back(frames[f]);
    }
    st.bursts.push_back({start, last_moving, kind});
    add_static(std::uniform_int_distribution<int>(o.gap_min, o.gap_max)(rng));
  }
  add_static(o.tail);
  return st;
}

AdcCube synthesize_stream_frame(const SyntheticStream& stream, const RadarConfig& config,
                                std::size_t index) {
  if (index >= stream.scenes.size()) throw ValidationError("stream frame index out of range");
  auto cube = synthesize_frame(config, stream.scenes[index], stream.snr_db,
                               frame_seed(stream.seed, static_cast<std::int64_t>(index)));
  cube.frame_index = static_cast<std::int64_t>(index);
  return cube;
}

std::vector<LabeledProfile> make_dtw_templates(const AnchorLocation& where,
                                               const RadarConfig& config,
                                               const PipelineParams& params,
                                               const SceneOptions& scene) {
  std::vector<LabeledProfile> out;
  for (int c = 0; c < kNumGestureClasses - 1; ++c) {
    GestureScript s;
    s.kind = gesture_from_index(c);
    s.anchor_distance = where.distance;
    s.anchor_angle = where.angle;
    s.duration = 1.2;
    const auto seq = synthesize_sequence(s, config, params, scene, 0).drai;
    out.push_back({extract_trajectory_profile(seq), s.kind});
  }
  return out;
}

}  // namespace mmg
