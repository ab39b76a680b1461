#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "rtk/lane_graph.hpp"
#include "rtk/scene.hpp"

namespace rtk::test {

// Polyline through the given points, densified to one vertex per integer row
// when the segment is long enough.
inline std::vector<Point> line(std::initializer_list<Point> pts) { return {pts}; }

inline LaneGraph make_graph(std::vector<LaneNode> nodes, std::vector<std::pair<int, int>> edges,
                            const GridSpec& grid = {}) {
  LaneGraph g;
  g.grid = grid;
  g.nodes = std::move(nodes);
  for (auto [a, b] : edges) {
    g.edges.push_back({a, b, {g.node(a).position, g.node(b).position}});
  }
  recompute_kinds(g);
  return g;
}

// Small deterministic generator for property tests (splitmix64).
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t s_;
};

// Every template x lane count, a few seeds each.
inline std::vector<SceneSpec> scene_sweep(int seeds_per_combo) {
  std::vector<SceneSpec> out;
  for (auto t : kAllTemplates) {
    for (int lanes = 1; lanes <= 4; ++lanes) {
      for (int s = 0; s < seeds_per_combo; ++s) {
        SceneSpec spec;
        spec.seed = static_cast<std::uint64_t>(s) * 1000003ULL + static_cast<std::uint64_t>(lanes);
        spec.layout = t;
        spec.lanes_per_direction = lanes;
        out.push_back(spec);
      }
    }
  }
  return out;
}

}  // namespace rtk::test
