#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "rtk/decoders.hpp"
#include "rtk/error.hpp"
#include "rtk/pipeline.hpp"

using namespace rtk;
using rtk::test::make_graph;

namespace {

LaneNode node(int id, double x, double y) { return {id, {x, y}, NodeKind::start}; }

LaneGraph fork_graph() {
  return make_graph({node(0, 64, 120), node(1, 64, 70), node(2, 40, 10), node(3, 90, 10)}, {{0, 1}, {1, 2}, {1, 3}});
}

}  // namespace

TEST_CASE("decoding a ground-truth grid returns the nodes exactly") {
  const EncoderConfig cfg;
  const LaneGraph g = scene_ground_truth(SceneSpec{});
  const auto kps = decode_keypoints(encode_keypoint_grid(g, cfg), 0.5, cfg.n_max);
  REQUIRE(kps.size() == g.nodes.size());
  for (const auto& k : kps) {
    const bool found = std::any_of(g.nodes.begin(), g.nodes.end(), [&](const LaneNode& n) { return n.position == k.position; });
    CHECK(found);
  }
  CHECK(decode_keypoints(KeypointGrid{Raster(16, 16, 3), 8}, 0.5, 16).empty());
}

TEST_CASE("decoding keeps the n_max most confident cells") {
  KeypointGrid k{Raster(16, 16, 3), 8};
  // 20 cells with distinct confidences 0.60 .. 0.79.
  for (int i = 0; i < 20; ++i) k.tensor.at(i / 16, i % 16, 0) = 0.6f + 0.01f * static_cast<float>((i * 7) % 20);
  const auto kps = decode_keypoints(k, 0.5, 16);
  REQUIRE(kps.size() == 16);
  std::vector<float> all;
  for (int i = 0; i < 20; ++i) all.push_back(k.tensor.at(i / 16, i % 16, 0));
  std::sort(all.rbegin(), all.rend());
  for (std::size_t i = 0; i < 16; ++i) CHECK(kps[i].confidence == all[i]);
}

TEST_CASE("round trip on random scenes: positions exact, edges identical") {
  const EncoderConfig cfg;
  for (const auto& spec : rtk::test::scene_sweep(5)) {
    const LaneGraph g = scene_ground_truth(spec);
    const auto t = encode_targets(g, cfg);
    const DecodeResult d = decode_targets(t.keypoints, t.affinity, g.grid, cfg);
    CHECK(d.diagnostics.empty());
    REQUIRE(d.graph.nodes.size() == g.nodes.size());
    REQUIRE(d.graph.edges.size() == g.edges.size());
    for (const auto& e : g.edges) {
      const Point from = g.node(e.from).position, to = g.node(e.to).position;
      const auto it = std::find_if(d.graph.edges.begin(), d.graph.edges.end(), [&](const LaneEdge& de) {
        return d.graph.node(de.from).position == from && d.graph.node(de.to).position == to;
      });
      REQUIRE(it != d.graph.edges.end());
      const AnchorLine a = resample_reference_line(e, cfg);
      REQUIRE(it->polyline.size() == a.rows.size());
      for (std::size_t k = 0; k < a.rows.size(); ++k) {
        CHECK(it->polyline[k].y == a.rows[k]);
        CHECK(it->polyline[k].x == a.xs[k]);
      }
    }
    for (const auto& n : d.graph.nodes) {
      const auto it = std::find_if(g.nodes.begin(), g.nodes.end(), [&](const LaneNode& m) { return m.position == n.position; });
      REQUIRE(it != g.nodes.end());
      CHECK(it->kind == n.kind);
    }
  }
}

TEST_CASE("zero affinity yields nodes without edges") {
  const EncoderConfig cfg;
  const LaneGraph g = fork_graph();
  const KeypointGrid k = encode_keypoint_grid(g, cfg);
  DenseAffinity a = encode_affinity(g, k, cfg);
  std::fill(a.conf.values().begin(), a.conf.values().end(), 0.0f);
  const DecodeResult d = decode_targets(k, a, g.grid, cfg);
  CHECK(d.graph.nodes.size() == 4);
  CHECK(d.graph.edges.empty());
}

TEST_CASE("a downward connection is dropped with a diagnostic") {
  const EncoderConfig cfg;
  const LaneGraph g = fork_graph();
  const KeypointGrid k = encode_keypoint_grid(g, cfg);
  DenseAffinity a = encode_affinity(g, k, cfg);
  a.conf.at(0, 3) = 0.9f;  // top-left end -> bottom start
  const DecodeResult d = decode_targets(k, a, g.grid, cfg);
  CHECK(d.graph.edges.size() == 3);
  REQUIRE(d.diagnostics.size() == 1);
  CHECK(d.diagnostics[0].kind == DiagnosticKind::NonMonotonePolyline);
}

TEST_CASE("an index naming an absent cell is inconsistent") {
  const EncoderConfig cfg;
  const LaneGraph g = fork_graph();
  const KeypointGrid k = encode_keypoint_grid(g, cfg);
  DenseAffinity a = encode_affinity(g, k, cfg);
  a.kp_index[0] = {5, 5};
  CHECK_THROWS_WITH_AS(decode_targets(k, a, g.grid, cfg), doctest::Contains("InconsistentIndex"), Error);
}
