#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mmgesture/augmentation.hpp"
#include "mmgesture/bench.hpp"
#include "mmgesture/classifier.hpp"
#include "mmgesture/config_file.hpp"
#include "mmgesture/dataset.hpp"
#include "mmgesture/file_formats.hpp"
#include "mmgesture/stream_runner.hpp"
#include "mmgesture/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mmg;

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

AppConfig load_app_config(const Globals& g) {
  return g.config_path.empty() ? AppConfig{} : load_config(g.config_path);
}

SceneOptions scene_of(const AppConfig& c) {
  SceneOptions s;
  s.detection = c.detection;
  s.roi = c.roi;
  return s;
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

ModelConfig model_for_grid(ModelConfig m, const RadarConfig& r) {
  m.input_rows = r.kept_range_bins;
  m.input_cols = r.angle_fft_size;
  return m;
}

std::vector<AnchorLocation> locations_named(const std::string& which) {
  if (which == "train") return training_locations();
  if (which == "heldout") return held_out_locations();
  throw ValidationError("--locations must be 'train' or 'heldout'");
}

void write_dataset(const std::vector<DraiSequence>& seqs, const Globals& g, const std::string& prefix,
                   const std::string& location) {
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    const std::string name = prefix + "_" + std::to_string(i) + ".drai";
    write_drai(out_path(g, name).string(), seqs[i]);
    ManifestEntry e;
    e.path = name;
    e.user = "synthetic";
    e.room = "sim";
    e.location = location;
    e.label = seqs[i].label;
    entries.push_back(e);
  }
  write_manifest(out_path(g, "manifest.json").string(), entries);
  std::cout << "wrote " << seqs.size() << " sequences and manifest.json to " << g.out_dir << "\n";
}

LoadedDataset load_reporting(const std::string& manifest, const RadarConfig& radar) {
  auto data = load_dataset(manifest, static_cast<std::size_t>(radar.kept_range_bins),
                           static_cast<std::size_t>(radar.angle_fft_size));
  for (const auto& e : data.errors) {
    std::cerr << "entry " << e.index << " (" << e.path << "): " << e.message << "\n";
  }
  std::cout << data.counts.report() << "\n";
  return data;
}

void print_report(const StreamReport& r) {
  auto row = [](const char* name, const LatencySummary& s) {
    std::cout << "  " << name << ": mean " << s.mean_ms << " ms, p99 " << s.p99_ms << " ms\n";
  };
  std::cout << "frames: " << r.frames << ", segments: " << r.segments << ", events: " << r.events.size() << "\n";
  row("dsp", r.dsp);
  row("roi", r.roi);
  row("segmentation", r.segmentation);
  row("inference", r.inference);
  row("total", r.total);
  if (r.counters) {
    std::cout << "N=" << r.counters->gestures << " W=" << r.counters->misclassified
              << " M=" << r.counters->missed << " P=" << r.counters->predictions << "\n";
  }
  if (r.cra_mpr) std::cout << "CRA=" << r.cra_mpr->cra << " MPR=" << r.cra_mpr->mpr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave dynamic range-angle gesture recognition toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out_dir, "Output directory");

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize a gesture capture or a labeled dataset");
  std::string kind = "PH";
  double distance = 0.8, angle_deg = 0.0, duration = 1.2, snr = 20.0;
  int dataset_count = 0;
  std::string which_locations = "train";
  bool write_cube_file = false;
  synth->add_option("--kind", kind, "Gesture code (PH PL LS RS CT AT NG)");
  synth->add_option("--distance", distance, "Anchor distance, m");
  synth->add_option("--angle-deg", angle_deg, "Anchor azimuth, degrees");
  synth->add_option("--duration", duration, "Gesture duration, s");
  synth->add_option("--snr", snr, "SNR in dB (inf disables noise)");
  synth->add_flag("--cubes", write_cube_file, "Also write the raw ADC capture");
  synth->add_option("--dataset", dataset_count, "Write this many randomized sequences instead");
  synth->add_option("--locations", which_locations, "Dataset anchors: train or heldout");

  // process
  auto* process = app.add_subcommand("process", "ADC capture to DRAI sequence");
  std::string input;
  process->add_option("--input", input, "ADC capture file")->required();

  // augment
  auto* augment = app.add_subcommand("augment", "Augment a labeled dataset");
  std::string manifest, policy_path;
  augment->add_option("--manifest", manifest, "Dataset manifest")->required();
  augment->add_option("--policy", policy_path, "Augmentation policy file");
  std::optional<int> factor;
  augment->add_option("--factor", factor, "Variants per input (overrides the policy)");

  // segment
  auto* segment = app.add_subcommand("segment", "Segment a capture into gesture windows");
  segment->add_option("--input", input, "ADC capture file")->required();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train the classifier");
  bool lite = false;
  train_cmd->add_option("--manifest", manifest, "Training manifest")->required();
  train_cmd->add_flag("--lite", lite, "Use the lite model");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a labeled dataset");
  std::string model_path;
  eval->add_option("--manifest", manifest, "Test manifest")->required();
  eval->add_option("--model", model_path, "Model checkpoint")->required();

  // stream
  auto* stream = app.add_subcommand("stream", "Run the real-time chain on a stream");
  bool pace = false, oracle_dtw = false;
  int gestures = 20;
  stream->add_option("--input", input, "ADC capture file (default: synthetic stream)");
  stream->add_option("--model", model_path, "Model checkpoint");
  stream->add_flag("--pace,!--no-pace", pace, "Pace frames at the frame period");
  stream->add_flag("--oracle-dtw", oracle_dtw, "Classify with the trajectory template oracle");
  stream->add_option("--gestures", gestures, "Gestures in the synthetic stream");

  // bench
  auto* bench = app.add_subcommand("bench", "Per-stage latency benchmark");
  int trials = 1000;
  bench->add_option("--trials", trials, "Trials per stage (>= 100)");

  CLI11_PARSE(app, argc, argv);

  try {
    const AppConfig cfg = load_app_config(g);
    const SceneOptions scene = scene_of(cfg);

    if (*synth) {
      if (dataset_count > 0) {
        DatasetSpec spec;
        spec.locations = locations_named(which_locations);
        spec.count = dataset_count;
        spec.seed = g.seed;
        write_dataset(generate_dataset(spec, cfg.radar, cfg.pipeline, scene), g, "seq", which_locations);
        return 0;
      }
      GestureScript s;
      s.kind = parse_gesture_code(kind);
      s.anchor_distance = distance;
      s.anchor_angle = angle_deg * std::numbers::pi / 180.0;
      s.duration = duration;
      s.noise_snr_db = snr;
      if (write_cube_file) {
        s.clutter = user_body(s.anchor_distance, s.anchor_angle);
        std::vector<AdcCube> cubes;
        const auto scenes = gesture_trajectory(s, cfg.radar);
        for (std::size_t f = 0; f < scenes.size(); ++f) {
          cubes.push_back(synthesize_frame(cfg.radar, scenes[f], snr,
                                           frame_seed(g.seed, static_cast<std::int64_t>(f))));
        }
        write_cubes(out_path(g, kind + ".mmwc").string(), cubes);
        s.clutter.clear();
      }
      const auto seq = synthesize_sequence(s, cfg.radar, cfg.pipeline, scene, g.seed).drai;
      write_drai(out_path(g, kind + ".drai").string(), seq);
      std::cout << "wrote " << seq.length() << " frames to " << out_path(g, kind + ".drai").string() << "\n";
    } else if (*process) {
      const auto cubes = read_cubes(input);
      DraiSequence seq;
      for (const auto& c : cubes) {
        DraiFrame f = masked_drai(process_frame(c, cfg.radar, cfg.pipeline), scene);
        f.frame_index = static_cast<std::int64_t>(seq.frames.size());
        f.timestamp = static_cast<double>(f.frame_index) * cfg.radar.frame_period;
        seq.frames.push_back(std::move(f));
      }
      const auto path = out_path(g, fs::path(input).stem().string() + ".drai");
      write_drai(path.string(), seq);
      std::cout << "wrote " << seq.length() << " frames to " << path.string() << "\n";
    } else if (*augment) {
      const auto data = load_reporting(manifest, cfg.radar);
      AugmentPolicy policy = policy_path.empty() ? cfg.augment : load_policy(policy_path);
      if (factor) policy.variants_per_input = *factor;
      write_dataset(augment_batch(data.sequences, policy, g.seed), g, "aug", "augmented");
    } else if (*segment) {
      const auto cubes = read_cubes(input);
      std::vector<DraiFrame> frames;
      for (const auto& c : cubes) {
        frames.push_back(masked_drai(process_frame(c, cfg.radar, cfg.pipeline), scene));
        frames.back().frame_index = static_cast<std::int64_t>(frames.size() - 1);
      }
      for (const auto& w : segment_stream(frames, cfg.segmenter)) {
        std::cout << "{\"start_frame\":" << w.start_frame << ",\"end_frame\":" << w.end_frame << "}\n";
      }
    } else if (*train_cmd) {
      const auto data = load_reporting(manifest, cfg.radar);
      ModelConfig mc = model_for_grid(lite ? ModelConfig::lite() : cfg.model, cfg.radar);
      TrainConfig tc = cfg.train;
      tc.seed = g.seed;
      tc.on_epoch = [](const EpochStats& s) {
        std::cout << "epoch " << s.epoch << " steps " << s.steps << " loss " << s.mean_loss << "\n";
      };
      const auto result = train(data.sequences, mc, tc);
      const auto path = out_path(g, "model.digm");
      save_model(result.model, path.string());
      std::cout << "parameters: " << result.model.parameter_count() << "\nwrote " << path.string() << "\n";
    } else if (*eval) {
      const auto data = load_reporting(manifest, cfg.radar);
      const Model model = load_model(model_path);
      std::size_t correct = 0, labeled = 0;
      std::vector<std::vector<int>> confusion(kNumGestureClasses, std::vector<int>(kNumGestureClasses, 0));
      for (const auto& seq : data.sequences) {
        if (!seq.label) continue;
        const auto p = predict(model, seq);
        ++labeled;
        correct += p.kind == *seq.label;
        ++confusion[static_cast<std::size_t>(*seq.label)][static_cast<std::size_t>(p.kind)];
      }
      if (labeled == 0) throw ValidationError("no labeled sequences to evaluate");
      std::cout << "accuracy: " << static_cast<double>(correct) / static_cast<double>(labeled) << " ("
                << correct << "/" << labeled << ")\nconfusion (rows = truth):\n";
      for (int r = 0; r < kNumGestureClasses; ++r) {
        std::cout << gesture_code(gesture_from_index(r));
        for (int c : confusion[static_cast<std::size_t>(r)]) std::cout << " " << c;
        std::cout << "\n";
      }
    } else if (*stream) {
      std::optional<Model> model;
      SegmentClassifier classifier;
      StreamScriptOptions so;
      so.gestures = gestures;
      so.seed = g.seed;
      if (oracle_dtw) {
        classifier = dtw_classifier(make_dtw_templates(so.anchor, cfg.radar, cfg.pipeline, scene));
      } else {
        if (model_path.empty()) throw ValidationError("stream needs --model or --oracle-dtw");
        model = load_model(model_path);
        if (model->config().input_rows != cfg.radar.kept_range_bins ||
            model->config().input_cols != cfg.radar.angle_fft_size) {
          throw ValidationError("model input shape does not match the radar grid");
        }
        classifier = model_classifier(*model);
      }
      StreamOptions opt;
      opt.pace = pace;
      opt.radar = cfg.radar;
      opt.pipeline = cfg.pipeline;
      opt.scene = scene;
      opt.segmenter = cfg.segmenter;
      std::ofstream events(out_path(g, "events.jsonl"));
      opt.on_event = [&events](const StreamEvent& e) {
        events << to_json_line(e) << "\n";
        std::cout << to_json_line(e) << "\n";
      };
      StreamReport rep;
      if (!input.empty()) {
        opt.stream_id = fs::path(input).stem().string();
        CubeListSource src(read_cubes(input));
        rep = run_stream(src, opt, classifier);
      } else {
        opt.stream_id = "synthetic-" + std::to_string(g.seed);
        SyntheticSource src(make_stream(so, cfg.radar), cfg.radar);
        const auto bursts = src.stream().bursts;
        rep = run_stream(src, opt, classifier, bursts);
      }
      print_report(rep);
    } else if (*bench) {
      std::cout << format_bench(bench_pipeline(cfg.radar, cfg.pipeline, trials, g.seed));
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
