#include "rtk/json_io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>

#include "rtk/container.hpp"
#include "rtk/error.hpp"

namespace rtk {

namespace {

double round6(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

const Json& member(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing");
  return *it;
}

double number(const Json& obj, const std::string& path, const char* key) {
  const Json& v = member(obj, path, key);
  if (!v.is_number()) schema(path + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const Json& obj, const std::string& path, const char* key) {
  const Json& v = member(obj, path, key);
  if (!v.is_number_integer()) schema(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string text(const Json& obj, const std::string& path, const char* key) {
  const Json& v = member(obj, path, key);
  if (!v.is_string()) schema(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const Json& array(const Json& obj, const std::string& path, const char* key) {
  const Json& v = member(obj, path, key);
  if (!v.is_array()) schema(path + "." + key, "expected an array");
  return v;
}

void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> known,
                std::vector<std::string>* warnings) {
  std::set<std::string> names(known.begin(), known.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (names.count(it.key())) continue;
    const std::string msg = path + "." + it.key() + ": unknown key ignored";
    if (warnings != nullptr) {
      warnings->push_back(msg);
    } else {
      std::cerr << "warning: " << msg << "\n";
    }
  }
}

std::string index_path(const std::string& path, const char* key, std::size_t i) {
  return path + "." + key + "[" + std::to_string(i) + "]";
}

}  // namespace

Json grid_to_json(const GridSpec& grid) {
  return Json{{"height", grid.height},
              {"width", grid.width},
              {"resolution", round6(grid.resolution)},
              {"keypoint_cell", grid.keypoint_cell},
              {"ego_row", grid.ego_row}};
}

GridSpec grid_from_json(const Json& j, const std::string& path, std::vector<std::string>* warnings) {
  GridSpec g;
  g.height = static_cast<int>(integer(j, path, "height"));
  g.width = static_cast<int>(integer(j, path, "width"));
  g.resolution = number(j, path, "resolution");
  g.keypoint_cell = static_cast<int>(integer(j, path, "keypoint_cell"));
  g.ego_row = static_cast<int>(integer(j, path, "ego_row"));
  check_keys(j, path, {"height", "width", "resolution", "keypoint_cell", "ego_row"}, warnings);
  try {
    g.validate();
  } catch (const Error& e) {
    schema(path, e.what());
  }
  return g;
}

Json graph_to_json(const LaneGraph& graph) {
  Json nodes = Json::array();
  for (const auto& n : graph.nodes) {
    nodes.push_back(Json{{"id", n.id},
                         {"x", round6(n.position.x)},
                         {"y", round6(n.position.y)},
                         {"kind", std::string(to_string(n.kind))}});
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges) {
    Json line = Json::array();
    for (const auto& p : e.polyline) line.push_back(Json::array({round6(p.x), round6(p.y)}));
    edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"polyline", std::move(line)}});
  }
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"grid_spec", grid_to_json(graph.grid)}};
}

LaneGraph graph_from_json(const Json& j, std::vector<std::string>* warnings) {
  const std::string root = "$";
  LaneGraph g;
  const Json& nodes = array(j, root, "nodes");
  const Json& edges = array(j, root, "edges");
  g.grid = grid_from_json(member(j, root, "grid_spec"), root + ".grid_spec", warnings);
  check_keys(j, root, {"nodes", "edges", "grid_spec"}, warnings);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string p = index_path(root, "nodes", i);
    const Json& n = nodes[i];
    LaneNode node;
    node.id = static_cast<int>(integer(n, p, "id"));
    node.position = {number(n, p, "x"), number(n, p, "y")};
    try {
      node.kind = node_kind_from_string(text(n, p, "kind"));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SchemaViolation) throw;
      schema(p + ".kind", "unknown node kind");
    }
    check_keys(n, p, {"id", "x", "y", "kind"}, warnings);
    g.nodes.push_back(node);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = index_path(root, "edges", i);
    const Json& e = edges[i];
    LaneEdge edge;
    edge.from = static_cast<int>(integer(e, p, "from"));
    edge.to = static_cast<int>(integer(e, p, "to"));
    const Json& line = array(e, p, "polyline");
    for (std::size_t k = 0; k < line.size(); ++k) {
      const Json& pt = line[k];
      const std::string pp = index_path(p, "polyline", k);
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
        schema(pp, "expected [x, y]");
      }
      edge.polyline.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    check_keys(e, p, {"from", "to", "polyline"}, warnings);
    g.edges.push_back(std::move(edge));
  }
  return g;
}

Json read_json_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  const std::string s = j.dump(2) + "\n";
  write_file_bytes(path, std::vector<std::uint8_t>(s.begin(), s.end()));
}

void save_graph_json(const std::filesystem::path& path, const LaneGraph& graph) {
  write_json_file(path, graph_to_json(graph));
}

LaneGraph load_graph_json(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return graph_from_json(read_json_file(path), warnings);
}

Json encoder_to_json(const EncoderConfig& cfg) {
  return Json{{"truncation_px", round6(cfg.truncation_px)},
              {"anchor_step_px", cfg.anchor_step_px},
              {"n_max", cfg.n_max},
              {"n_rmax", cfg.n_rmax}};
}

EncoderConfig encoder_from_json(const Json& j, const std::string& path) {
  EncoderConfig cfg;
  cfg.truncation_px = number(j, path, "truncation_px");
  cfg.anchor_step_px = static_cast<int>(integer(j, path, "anchor_step_px"));
  cfg.n_max = static_cast<int>(integer(j, path, "n_max"));
  cfg.n_rmax = static_cast<int>(integer(j, path, "n_rmax"));
  return cfg;
}

Json scene_spec_to_json(const SceneSpec& spec) {
  return Json{{"seed", spec.seed},
              {"template", std::string(to_string(spec.layout))},
              {"lanes_per_direction", spec.lanes_per_direction},
              {"lane_width", round6(spec.lane_width)},
              {"curvature", round6(spec.curvature)},
              {"noise",
               Json{{"dropout_prob", round6(spec.noise.dropout_prob)},
                    {"intensity_sigma", round6(spec.noise.intensity_sigma)},
                    {"occlusion_boxes", spec.noise.occlusion_boxes}}},
              {"grid_spec", grid_to_json(spec.grid)}};
}

SceneSpec scene_spec_from_json(const Json& j, const std::string& path) {
  SceneSpec s;
  const Json& seed = member(j, path, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    schema(path + ".seed", "expected a non-negative integer");
  }
  s.seed = seed.get<std::uint64_t>();
  try {
    s.layout = scene_template_from_string(text(j, path, "template"));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SchemaViolation && e.code() != ErrorCode::InvalidArgument) throw;
    schema(path + ".template", "unknown template");
  }
  s.lanes_per_direction = static_cast<int>(integer(j, path, "lanes_per_direction"));
  s.lane_width = number(j, path, "lane_width");
  s.curvature = number(j, path, "curvature");
  const Json& noise = member(j, path, "noise");
  s.noise.dropout_prob = number(noise, path + ".noise", "dropout_prob");
  s.noise.intensity_sigma = number(noise, path + ".noise", "intensity_sigma");
  s.noise.occlusion_boxes = static_cast<int>(integer(noise, path + ".noise", "occlusion_boxes"));
  s.grid = grid_from_json(member(j, path, "grid_spec"), path + ".grid_spec");
  return s;
}

Json eval_report_to_json(const EvalReport& r) {
  const auto rates = [](const RateCounts& c) {
    return Json{{"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()},
                {"tp", c.tp},               {"fp", c.fp},           {"fn", c.fn}};
  };
  Json out{{"frames", r.frames}};
  if (r.fields) {
    const char* names[3] = {"R", "D", "P"};
    Json fields;
    for (std::size_t k = 0; k < 3; ++k) fields[names[k]] = Json{{"mae", (*r.fields)[k].mae}, {"ssim", (*r.fields)[k].ssim}};
    out["field_metrics"] = std::move(fields);
  }
  out["kp_metrics"] = rates(r.keypoints);
  Json conn = rates(r.connectivity.counts);
  conn["avg_offset_cm"] = r.connectivity.avg_offset_cm();
  conn["offset_edges"] = r.connectivity.offset_edges;
  out["conn_metrics"] = std::move(conn);
  return out;
}

std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_hex(const std::string& text) { return sha256_hex(std::vector<std::uint8_t>(text.begin(), text.end())); }

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file_bytes(path)); }

std::string spec_digest(const SceneSpec& spec) { return sha256_hex(scene_spec_to_json(spec).dump()); }

namespace {

Json file_json(const ManifestFile& f) { return Json{{"path", f.path}, {"sha256", f.sha256}}; }

ManifestFile file_from_json(const Json& j, const std::string& path) {
  return {text(j, path, "path"), text(j, path, "sha256")};
}

}  // namespace

Json manifest_to_json(const DatasetManifest& m) {
  Json scenes = Json::array();
  for (const auto& e : m.scenes) {
    scenes.push_back(Json{{"name", e.name},
                          {"spec", scene_spec_to_json(e.spec)},
                          {"spec_digest", e.spec_digest},
                          {"keypoints", e.keypoints},
                          {"bucket", std::string(to_string(complexity_bucket(std::max(1, e.keypoints))))},
                          {"files", Json{{"grid", file_json(e.grid)},
                                         {"targets", file_json(e.targets)},
                                         {"graph", file_json(e.graph)}}}});
  }
  Json skipped = Json::array();
  for (const auto& [seed, reason] : m.skipped) skipped.push_back(Json{{"seed", seed}, {"reason", reason}});
  return Json{{"format_version", m.format_version},
              {"grid_spec", grid_to_json(m.grid)},
              {"encoder", encoder_to_json(m.encoder)},
              {"scenes", std::move(scenes)},
              {"skipped", std::move(skipped)}};
}

DatasetManifest manifest_from_json(const Json& j) {
  DatasetManifest m;
  m.format_version = static_cast<int>(integer(j, "$", "format_version"));
  if (m.format_version < 1 || m.format_version > DatasetManifest::kFormatVersion) {
    schema("$.format_version", "unsupported version " + std::to_string(m.format_version));
  }
  m.grid = grid_from_json(member(j, "$", "grid_spec"), "$.grid_spec");
  m.encoder = encoder_from_json(member(j, "$", "encoder"), "$.encoder");
  const Json& scenes = array(j, "$", "scenes");
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const std::string p = index_path("$", "scenes", i);
    ManifestEntry e;
    e.name = text(scenes[i], p, "name");
    e.spec = scene_spec_from_json(member(scenes[i], p, "spec"), p + ".spec");
    e.spec_digest = text(scenes[i], p, "spec_digest");
    e.keypoints = static_cast<int>(integer(scenes[i], p, "keypoints"));
    const Json& files = member(scenes[i], p, "files");
    e.grid = file_from_json(member(files, p + ".files", "grid"), p + ".files.grid");
    e.targets = file_from_json(member(files, p + ".files", "targets"), p + ".files.targets");
    e.graph = file_from_json(member(files, p + ".files", "graph"), p + ".files.graph");
    m.scenes.push_back(std::move(e));
  }
  if (auto it = j.find("skipped"); it != j.end() && it->is_array()) {
    for (const auto& s : *it) m.skipped.emplace_back(s.value("seed", std::uint64_t{0}), s.value("reason", ""));
  }
  return m;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
  write_json_file(path, manifest_to_json(m));
}

DatasetManifest load_manifest(const std::filesystem::path& path) { return manifest_from_json(read_json_file(path)); }

std::vector<std::string> verify_manifest(const DatasetManifest& m, const std::filesystem::path& root) {
  std::vector<std::string> bad;
  for (const auto& e : m.scenes) {
    for (const ManifestFile* f : {&e.grid, &e.targets, &e.graph}) {
      std::string actual;
      try {
        actual = sha256_file(root / f->path);
      } catch (const Error&) {
      }
      if (actual != f->sha256) bad.push_back(f->path);
    }
  }
  return bad;
}

}  // namespace rtk
