#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "rtk/container.hpp"
#include "rtk/error.hpp"
#include "rtk/json_io.hpp"
#include "rtk/pipeline.hpp"
#include "rtk/render.hpp"

using namespace rtk;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rtk_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

SceneSpec fork_spec() {
  SceneSpec spec;
  spec.seed = 42;
  spec.layout = SceneTemplate::fork;
  spec.lanes_per_direction = 2;
  return spec;
}

}  // namespace

TEST_CASE("container round trip is bit exact") {
  const EncoderConfig cfg;
  const LaneGraph g = scene_ground_truth(fork_spec());
  const EncodedTargets t = encode_targets(g, cfg);
  const TensorContainer c = targets_to_container(t.fields, t.keypoints, t.affinity);
  const auto bytes = serialize_container(c);
  const TensorContainer back = parse_container(bytes);
  CHECK(back == c);
  CHECK(serialize_container(back) == bytes);

  const FieldSet f = fields_from_container(back, cfg.truncation_px);
  CHECK(f.R == t.fields.R);
  CHECK(f.D == t.fields.D);
  const DenseAffinity a = affinity_from_container(back);
  CHECK(a.kp_index == t.affinity.kp_index);
  CHECK(a.lines == t.affinity.lines);
  CHECK(keypoints_from_container(back, g.grid.keypoint_cell).tensor == t.keypoints.tensor);
}

TEST_CASE("container parse failures") {
  TensorContainer c;
  c.add("R", Raster(4, 4, 1, 0.5f));
  auto bytes = serialize_container(c);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(parse_container(bad), doctest::Contains("BadMagic"), Error);

  for (std::size_t cut : {std::size_t{3}, std::size_t{6}, bytes.size() / 2, bytes.size() - 1}) {
    const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    CHECK_THROWS_WITH_AS(parse_container(truncated), doctest::Contains("TruncatedFile"), Error);
  }

  CHECK_THROWS_WITH_AS(c.add("R", Raster(2, 2)), doctest::Contains("DuplicateName"), Error);
  // A file that names a tensor twice is rejected on parse as well.
  auto twice = bytes;
  twice[4] = 2;
  twice.insert(twice.end(), bytes.begin() + 8, bytes.end());
  CHECK_THROWS_WITH_AS(parse_container(twice), doctest::Contains("DuplicateName"), Error);

  CHECK_THROWS_WITH_AS(load_container("/nonexistent/dir/x.rtk"), doctest::Contains("IoError"), Error);
  try {
    load_container("/nonexistent/dir/x.rtk");
  } catch (const Error& e) {
    CHECK(e.is_io());
  }
}

TEST_CASE("bev container round trip") {
  const SceneSpec spec = fork_spec();
  const auto [graph, ego] = generate_scene(spec);
  const BevGrid bev = rasterize_channels(graph, spec);
  const TensorContainer c = bev_to_container(bev, observation_mask(spec));
  const BevGrid back = bev_from_container(parse_container(serialize_container(c)), spec.grid);
  CHECK(back.occupancy == bev.occupancy);
  CHECK(back.ground_semantics == bev.ground_semantics);
  CHECK(back.lidar_intensity == bev.lidar_intensity);
  // Masses are stored as f32.
  REQUIRE(back.occupancy_mass.size() == bev.occupancy_mass.size());
  double worst = 0;
  for (std::size_t i = 0; i < bev.occupancy_mass.size(); ++i) {
    worst = std::max({worst, std::abs(back.occupancy_mass[i].occupied - bev.occupancy_mass[i].occupied),
                      std::abs(back.occupancy_mass[i].free - bev.occupancy_mass[i].free)});
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("graph json round trip") {
  const LaneGraph g = scene_ground_truth(fork_spec());
  const Json j = graph_to_json(g);
  const LaneGraph back = graph_from_json(Json::parse(j.dump()));
  CHECK(structurally_equal(g, back, 1e-6));
  CHECK(graph_to_json(back).dump() == j.dump());
}

TEST_CASE("graph json schema errors name the offending path") {
  const LaneGraph g = scene_ground_truth(fork_spec());
  Json j = graph_to_json(g);

  Json no_edges = j;
  no_edges.erase("edges");
  CHECK_THROWS_WITH_AS(graph_from_json(no_edges), doctest::Contains("$.edges"), Error);
  CHECK_THROWS_WITH_AS(graph_from_json(no_edges), doctest::Contains("SchemaViolation"), Error);

  Json bad_x = j;
  bad_x["nodes"][1]["x"] = "left";
  CHECK_THROWS_WITH_AS(graph_from_json(bad_x), doctest::Contains("$.nodes[1].x"), Error);

  Json extra = j;
  extra["comment"] = "hand edited";
  std::vector<std::string> warnings;
  CHECK_NOTHROW(graph_from_json(extra, &warnings));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("comment") != std::string::npos);
}

TEST_CASE("manifest round trip and verification") {
  const fs::path dir = scratch_dir("manifest");
  const SceneSpec spec = fork_spec();
  const LaneGraph g = scene_ground_truth(spec);
  save_graph_json(dir / "graph.json", g);

  DatasetManifest m;
  ManifestEntry e;
  e.name = "scene_000042";
  e.spec = spec;
  e.spec_digest = spec_digest(spec);
  e.keypoints = static_cast<int>(g.nodes.size());
  e.graph = {"graph.json", sha256_file(dir / "graph.json")};
  e.grid = e.graph;
  e.targets = e.graph;
  m.scenes.push_back(e);
  m.skipped.push_back({7, "AnchorOverflow: too many anchors"});
  save_manifest(dir / "manifest.json", m);

  const DatasetManifest back = load_manifest(dir / "manifest.json");
  CHECK(manifest_to_json(back).dump() == manifest_to_json(m).dump());
  CHECK(verify_manifest(back, dir).empty());

  std::ofstream(dir / "graph.json", std::ios::app) << " ";
  CHECK_FALSE(verify_manifest(back, dir).empty());
  fs::remove_all(dir);
}

TEST_CASE("sha256 known digest") {
  CHECK(sha256_hex(std::string("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string()) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("rendering an empty graph gives a blank image") {
  LaneGraph empty;
  SceneView view{empty.grid, &empty, nullptr, nullptr};
  const Image img = render_scene(view, RenderLayers::parse("keypoints,connections"));
  CHECK(img.width == 128);
  CHECK(img.height == 128);
  CHECK(std::all_of(img.rgb.begin(), img.rgb.end(), [](std::uint8_t v) { return v == 0; }));
}

TEST_CASE("decoded ground truth renders like the ground truth") {
  const EncoderConfig cfg;
  for (auto t : kAllTemplates) {
    SceneSpec spec = fork_spec();
    spec.layout = t;
    const LaneGraph g = scene_ground_truth(spec);
    const EncodedTargets targets = encode_targets(g, cfg);
    const LaneGraph decoded = decode_targets(targets.keypoints, targets.affinity, g.grid, cfg).graph;
    const RenderLayers layers = RenderLayers::parse("keypoints,connections");
    const Image a = render_scene({g.grid, &g, nullptr, nullptr}, layers, cfg);
    const Image b = render_scene({g.grid, &decoded, nullptr, nullptr}, layers, cfg);
    CHECK(a == b);
    const Image both = side_by_side(a, b);
    CHECK(both.width == 2 * a.width);
  }
}

TEST_CASE("layers are additive") {
  const EncoderConfig cfg;
  const SceneSpec spec = fork_spec();
  const auto [graph, ego] = generate_scene(spec);
  const BevGrid bev = rasterize_channels(graph, spec);
  const LaneGraph g = scene_ground_truth(spec);
  const FieldSet f = encode_fields(g, cfg);
  const SceneView view{g.grid, &g, &bev, &f};

  const Image all = render_scene(view, RenderLayers::parse("all"), cfg);
  Image sum(all.width, all.height);
  for (const char* name : {"input", "R", "D", "P", "keypoints", "connections"}) {
    const Image layer = render_layer(view, name, cfg);
    for (std::size_t i = 0; i < sum.rgb.size(); ++i) {
      sum.rgb[i] = static_cast<std::uint8_t>(std::min(255, sum.rgb[i] + layer.rgb[i]));
    }
  }
  CHECK(all == sum);
  CHECK_THROWS_WITH_AS(RenderLayers::parse("R,bogus"), doctest::Contains("InvalidArgument"), Error);
}

TEST_CASE("png round trip") {
  const fs::path dir = scratch_dir("png");
  Image img(5, 3);
  for (std::size_t i = 0; i < img.rgb.size(); ++i) img.rgb[i] = static_cast<std::uint8_t>(i * 17);
  write_png(dir / "a.png", img);
  CHECK(read_png(dir / "a.png") == img);
  fs::remove_all(dir);
}
