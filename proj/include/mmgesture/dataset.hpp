#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmgesture/common.hpp"

namespace mmg {

struct ManifestEntry {
  std::string path;  // relative paths resolve against the manifest directory
  std::string user;
  std::string room;
  std::string location;
  std::optional<GestureKind> label;
  std::string format = "drai";
};

struct EntryError {
  std::size_t index = 0;
  std::string path;
  std::string message;
};

/// Sample counts grouped by user, room and location.
struct DomainCounts {
  std::map<std::string, std::size_t> users;
  std::map<std::string, std::size_t> rooms;
  std::map<std::string, std::size_t> locations;
  std::map<std::string, std::size_t> domains;  // "user/room/location"
  std::size_t samples = 0;
  std::size_t gesture_samples = 0;
  std::size_t negative_samples = 0;

  void add(const ManifestEntry& entry, std::optional<GestureKind> label);

  /// e.g. "2 users x 1 rooms x 4 locations = 8 domains (8 observed); 40
  /// samples: 34 gesture, 6 negative".
  std::string report() const;
};

struct LoadedDataset {
  std::vector<DraiSequence> sequences;
  std::vector<ManifestEntry> entries;  // parallel to sequences
  std::vector<EntryError> errors;
  DomainCounts counts;
};

/// {"entries": [{"path", "user", "room", "location", "label", "format"}]}
std::vector<ManifestEntry> parse_manifest(const std::string& text);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

/// Loads every entry it can. Missing files, unsupported formats, shape or
/// label problems are recorded per entry and loading continues. A malformed
/// manifest raises ValidationError.
LoadedDataset load_dataset(const std::string& manifest_path,
                           std::optional<std::size_t> range_bins = std::nullopt,
                           std::optional<std::size_t> angle_bins = std::nullopt);

}  // namespace mmg
