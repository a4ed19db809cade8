#include "mmgesture/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mmgesture/file_formats.hpp"

namespace mmg {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string string_field(const json& e, const char* key, std::size_t index, bool required) {
  if (!e.contains(key)) {
    if (required) throw ValidationError("manifest entry " + std::to_string(index) + " lacks '" + key + "'");
    return {};
  }
  if (!e[key].is_string()) {
    throw ValidationError("manifest entry " + std::to_string(index) + ": '" + key + "' must be a string");
  }
  return e[key].get<std::string>();
}

}  // namespace

void DomainCounts::add(const ManifestEntry& entry, std::optional<GestureKind> label) {
  ++users[entry.user];
  ++rooms[entry.room];
  ++locations[entry.location];
  ++domains[entry.user + "/" + entry.room + "/" + entry.location];
  ++samples;
  if (label && *label == GestureKind::kNegative) {
    ++negative_samples;
  } else if (label) {
    ++gesture_samples;
  }
}

std::string DomainCounts::report() const {
  std::ostringstream os;
  os << users.size() << " users x " << rooms.size() << " rooms x " << locations.size()
     << " locations = " << users.size() * rooms.size() * locations.size() << " domains ("
     << domains.size() << " observed); " << samples << " samples: " << gesture_samples
     << " gesture, " << negative_samples << " negative";
  return os.str();
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  if (!root.is_object() || !root.contains("entries") || !root["entries"].is_array()) {
    throw ValidationError("manifest must be an object with an 'entries' list");
  }
  std::vector<ManifestEntry> out;
  std::size_t i = 0;
  for (const auto& e : root["entries"]) {
    if (!e.is_object()) throw ValidationError("manifest entry " + std::to_string(i) + " is not an object");
    ManifestEntry m;
    m.path = string_field(e, "path", i, true);
    m.user = string_field(e, "user", i, false);
    m.room = string_field(e, "room", i, false);
    m.location = string_field(e, "location", i, false);
    const std::string label = string_field(e, "label", i, false);
    if (!label.empty()) m.label = parse_gesture_code(label);
    const std::string format = string_field(e, "format", i, false);
    if (!format.empty()) m.format = format;
    out.push_back(std::move(m));
    ++i;
  }
  return out;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  json root;
  root["entries"] = json::array();
  for (const auto& m : entries) {
    json e;
    e["path"] = m.path;
    e["user"] = m.user;
    e["room"] = m.room;
    e["location"] = m.location;
    if (m.label) e["label"] = std::string(gesture_code(*m.label));
    e["format"] = m.format;
    root["entries"].push_back(e);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << root.dump(2) << "\n";
}

LoadedDataset load_dataset(const std::string& manifest_path, std::optional<std::size_t> range_bins,
                           std::optional<std::size_t> angle_bins) {
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError("cannot open manifest " + manifest_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto entries = parse_manifest(ss.str());
  const fs::path base = fs::path(manifest_path).parent_path();

  LoadedDataset out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& m = entries[i];
    auto error = [&](const std::string& msg) { out.errors.push_back({i, m.path, msg}); };
    if (m.format != "drai") {
      error("unsupported format '" + m.format + "'");
      continue;
    }
    const fs::path p = fs::path(m.path).is_absolute() ? fs::path(m.path) : base / m.path;
    if (!fs::exists(p)) {
      error("missing file");
      continue;
    }
    DraiSequence seq;
    try {
      seq = read_drai(p.string());
      check_uniform_shape(seq);
    } catch (const ValidationError& e) {
      error(e.what());
      continue;
    }
    if (seq.frames.empty()) {
      error("empty sequence");
      continue;
    }
    const auto& f0 = seq.frames.front();
    if ((range_bins && f0.range_bins != *range_bins) || (angle_bins && f0.angle_bins != *angle_bins)) {
      error("frame shape " + std::to_string(f0.range_bins) + "x" + std::to_string(f0.angle_bins) +
            " does not match the expected grid");
      continue;
    }
    if (m.label && seq.label && *m.label != *seq.label) {
      error("manifest label " + std::string(gesture_code(*m.label)) + " disagrees with file label " +
            std::string(gesture_code(*seq.label)));
      continue;
    }
    if (!seq.label) seq.label = m.label;
    out.counts.add(m, seq.label);
    out.sequences.push_back(std::move(seq));
    out.entries.push_back(m);
  }
  return out;
}

}  // namespace mmg
