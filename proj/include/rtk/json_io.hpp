#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "rtk/encoders.hpp"
#include "rtk/lane_graph.hpp"
#include "rtk/metrics.hpp"
#include "rtk/scene.hpp"

namespace rtk {

using Json = nlohmann::ordered_json;

/// Coordinates are rounded to 6 decimals on output.
Json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const Json& j, const std::string& path = "$", std::vector<std::string>* warnings = nullptr);

/// {nodes:[{id,x,y,kind}], edges:[{from,to,polyline:[[x,y],...]}], grid_spec:{...}}
Json graph_to_json(const LaneGraph& graph);
/// Throws SchemaViolation naming the JSON path of the offending field. Unknown
/// keys are reported through `warnings`, or on stderr when it is null.
LaneGraph graph_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);

void save_graph_json(const std::filesystem::path& path, const LaneGraph& graph);
LaneGraph load_graph_json(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

Json encoder_to_json(const EncoderConfig& cfg);
EncoderConfig encoder_from_json(const Json& j, const std::string& path = "$");

Json scene_spec_to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(const Json& j, const std::string& path = "$");

Json eval_report_to_json(const EvalReport& report);

/// Lower-case hex SHA-256.
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);
std::string sha256_hex(const std::string& text);
std::string sha256_file(const std::filesystem::path& path);

/// Digest of the canonical JSON form of a scene spec.
std::string spec_digest(const SceneSpec& spec);

Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

struct ManifestFile {
  std::string path;  // relative to the manifest directory
  std::string sha256;
};

struct ManifestEntry {
  std::string name;
  SceneSpec spec;
  std::string spec_digest;
  int keypoints = 0;
  ManifestFile grid;
  ManifestFile targets;
  ManifestFile graph;
};

struct DatasetManifest {
  static constexpr int kFormatVersion = 1;
  int format_version = kFormatVersion;
  GridSpec grid;
  EncoderConfig encoder;
  std::vector<ManifestEntry> scenes;
  std::vector<std::pair<std::uint64_t, std::string>> skipped;  // seed, reason
};

Json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const Json& j);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& m);
DatasetManifest load_manifest(const std::filesystem::path& path);
/// Recomputes every file digest; returns the relative paths that differ.
std::vector<std::string> verify_manifest(const DatasetManifest& m, const std::filesystem::path& root);

}  // namespace rtk
