#include "mmgesture/config_file.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace mmg {
namespace {

using json = nlohmann::json;

// Binds section keys to fields, for both reading and writing.
class Section {
 public:
  explicit Section(std::string name) : name_(std::move(name)) {}

  void real(const char* key, double& v) {
    setters_[key] = [n = name_, key, &v](const json& j) {
      if (!j.is_number()) fail(n, key, "expected a number");
      v = j.get<double>();
    };
    out_[key] = v;
  }
  void integer(const char* key, int& v) {
    setters_[key] = [n = name_, key, &v](const json& j) {
      if (!j.is_number_integer()) fail(n, key, "expected an integer");
      v = j.get<int>();
    };
    out_[key] = v;
  }
  void u64(const char* key, std::uint64_t& v) {
    setters_[key] = [n = name_, key, &v](const json& j) {
      if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        fail(n, key, "expected a non-negative integer");
      }
      v = j.get<std::uint64_t>();
    };
    out_[key] = v;
  }
  void boolean(const char* key, bool& v) {
    setters_[key] = [n = name_, key, &v](const json& j) {
      if (!j.is_boolean()) fail(n, key, "expected true or false");
      v = j.get<bool>();
    };
    out_[key] = v;
  }
  void int_list(const char* key, std::vector<int>& v) {
    setters_[key] = [n = name_, key, &v](const json& j) {
      if (!j.is_array()) fail(n, key, "expected a list of integers");
      std::vector<int> tmp;
      for (const auto& e : j) {
        if (!e.is_number_integer()) fail(n, key, "expected a list of integers");
        tmp.push_back(e.get<int>());
      }
      v = std::move(tmp);
    };
    out_[key] = v;
  }
  template <typename E>
  void enumeration(const char* key, E& v, std::vector<std::pair<std::string, E>> names) {
    setters_[key] = [n = name_, key, &v, names](const json& j) {
      if (!j.is_string()) fail(n, key, "expected a string");
      for (const auto& [label, e] : names) {
        if (label == j.get<std::string>()) {
          v = e;
          return;
        }
      }
      fail(n, key, "unknown value '" + j.get<std::string>() + "'");
    };
    for (const auto& [label, e] : names) {
      if (e == v) out_[key] = label;
    }
  }

  void apply(const json& obj) {
    if (!obj.is_object()) throw ValidationError("config section '" + name_ + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const auto s = setters_.find(it.key());
      if (s == setters_.end()) throw ValidationError("unknown key '" + name_ + "." + it.key() + "'");
      s->second(it.value());
    }
  }

  const json& dump() const { return out_; }

 private:
  [[noreturn]] static void fail(const std::string& section, const std::string& key,
                                const std::string& what) {
    throw ValidationError("config key '" + section + "." + key + "': " + what);
  }

  std::string name_;
  std::map<std::string, std::function<void(const json&)>> setters_;
  json out_ = json::object();
};

Section radar_section(RadarConfig& c) {
  Section s("radar");
  s.real("wavelength", c.wavelength);
  s.real("chirp_slope", c.chirp_slope);
  s.real("chirp_interval", c.chirp_interval);
  s.integer("chirps_per_frame", c.chirps_per_frame);
  s.integer("samples_per_chirp", c.samples_per_chirp);
  s.real("sample_rate", c.sample_rate);
  s.integer("rx_channels", c.rx_channels);
  s.real("element_spacing", c.element_spacing);
  s.real("frame_period", c.frame_period);
  s.integer("kept_range_bins", c.kept_range_bins);
  s.integer("angle_fft_size", c.angle_fft_size);
  s.real("signal_speed", c.signal_speed);
  return s;
}

Section pipeline_section(PipelineParams& p) {
  Section s("pipeline");
  s.integer("doppler_bin_threshold", p.doppler_bin_threshold);
  s.real("power_threshold_factor", p.power_threshold_factor);
  s.enumeration("window", p.window,
                {{"rectangular", WindowKind::kRectangular}, {"hann", WindowKind::kHann}});
  return s;
}

Section segmenter_section(SegmenterParams& p) {
  Section s("segmenter");
  s.real("motion_threshold", p.motion_threshold);
  s.integer("detection_window", p.detection_window);
  s.integer("min_segment", p.min_segment);
  s.integer("max_segment", p.max_segment);
  s.enumeration("log_base", p.log_base, {{"natural", LogBase::kNatural}, {"10", LogBase::kBase10}});
  s.integer("exclusion_range", p.exclusion_range);
  s.integer("exclusion_angle", p.exclusion_angle);
  return s;
}

Section detection_section(DetectionParams& p) {
  Section s("detection");
  s.integer("max_targets", p.max_targets);
  s.real("stop_fraction", p.stop_fraction);
  s.real("noise_floor", p.noise_floor);
  s.integer("cancel_range", p.cancel_range);
  s.integer("cancel_angle", p.cancel_angle);
  return s;
}

Section roi_section(RoiExtent& r) {
  Section s("roi");
  s.integer("range_half_width", r.range_half_width);
  s.integer("angle_half_width", r.angle_half_width);
  return s;
}

Section model_section(ModelConfig& m) {
  Section s("model");
  s.integer("input_rows", m.input_rows);
  s.integer("input_cols", m.input_cols);
  s.int_list("conv_filters", m.conv_filters);
  s.integer("embedding_size", m.embedding_size);
  s.integer("recurrent_hidden", m.recurrent_hidden);
  s.integer("classes", m.classes);
  s.real("dropout", m.dropout);
  s.enumeration("normalization", m.normalization,
                {{"fixed_scale", InputNormalization::kFixedScale},
                 {"per_sequence_max", InputNormalization::kPerSequenceMax}});
  s.real("input_scale", m.input_scale);
  return s;
}

Section train_section(TrainConfig& t) {
  Section s("train");
  s.real("learning_rate", t.learning_rate);
  s.integer("batch_size", t.batch_size);
  s.integer("epochs", t.epochs);
  s.u64("seed", t.seed);
  s.real("beta1", t.beta1);
  s.real("beta2", t.beta2);
  s.real("epsilon", t.epsilon);
  s.integer("max_steps", t.max_steps);
  s.real("target_loss", t.target_loss);
  return s;
}

Section augment_section(AugmentPolicy& a) {
  Section s("augment");
  s.integer("delta_x_min", a.delta_x_min);
  s.integer("delta_x_max", a.delta_x_max);
  s.integer("delta_y_min", a.delta_y_min);
  s.integer("delta_y_max", a.delta_y_max);
  s.boolean("swap_translation_axes", a.swap_translation_axes);
  s.integer("interval_min", a.interval_min);
  s.integer("interval_max", a.interval_max);
  s.real("rotation_min", a.rotation_min);
  s.real("rotation_max", a.rotation_max);
  s.real("scale_min", a.scale_min);
  s.real("scale_max", a.scale_max);
  s.real("power_45_min", a.power_45_min);
  s.real("power_45_max", a.power_45_max);
  s.real("power_60_min", a.power_60_min);
  s.real("power_60_max", a.power_60_max);
  s.real("p_translate", a.p_translate);
  s.real("p_speed", a.p_speed);
  s.real("p_reverse", a.p_reverse);
  s.real("p_geometric", a.p_geometric);
  s.real("p_power", a.p_power);
  s.boolean("randomize_resample_phase", a.randomize_resample_phase);
  s.integer("variants_per_input", a.variants_per_input);
  s.real("min_energy_retention", a.min_energy_retention);
  s.integer("max_redraws", a.max_redraws);
  return s;
}

std::map<std::string, Section> sections(AppConfig& c) {
  std::map<std::string, Section> m;
  m.emplace("radar", radar_section(c.radar));
  m.emplace("pipeline", pipeline_section(c.pipeline));
  m.emplace("segmenter", segmenter_section(c.segmenter));
  m.emplace("detection", detection_section(c.detection));
  m.emplace("roi", roi_section(c.roi));
  m.emplace("model", model_section(c.model));
  m.emplace("train", train_section(c.train));
  m.emplace("augment", augment_section(c.augment));
  return m;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void AppConfig::validate() const {
  radar.validate();
  pipeline.validate(radar);
  segmenter.validate();
  detection.validate();
  if (roi.range_half_width < 0 || roi.angle_half_width < 0) throw ValidationError("negative ROI extent");
  model.validate();
  train.validate();
  augment.validate();
}

AppConfig parse_config(std::string_view text) {
  const json root = parse_json(text);
  if (!root.is_object()) throw ValidationError("config root must be an object");
  AppConfig c;
  auto secs = sections(c);
  for (auto it = root.begin(); it != root.end(); ++it) {
    const auto s = secs.find(it.key());
    if (s == secs.end()) throw ValidationError("unknown config section '" + it.key() + "'");
    s->second.apply(it.value());
  }
  c.validate();
  return c;
}

AppConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string dump_config(const AppConfig& config) {
  AppConfig copy = config;
  json root = json::object();
  for (auto& [name, sec] : sections(copy)) root[name] = sec.dump();
  return root.dump(2);
}

AugmentPolicy parse_policy(std::string_view text) {
  AugmentPolicy p;
  Section sec = augment_section(p);
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    sec.apply(parse_json(t));
  } else {
    json obj = json::object();
    std::istringstream lines{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (trim(line).empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ValidationError("policy line " + std::to_string(lineno) + ": expected key = value");
      }
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      try {
        obj[key] = json::parse(value);
      } catch (const json::parse_error&) {
        throw ValidationError("policy line " + std::to_string(lineno) + ": bad value '" + value + "'");
      }
    }
    sec.apply(obj);
  }
  p.validate();
  return p;
}

AugmentPolicy load_policy(const std::string& path) { return parse_policy(read_file(path)); }

}  // namespace mmg
