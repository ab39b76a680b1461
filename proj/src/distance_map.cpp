#include "rtk/distance_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rtk {

DistanceMap compute_distance_map(const LaneGraph& graph, double radius) {
  DistanceMap m;
  m.height = graph.grid.height;
  m.width = graph.grid.width;
  const std::size_t n = static_cast<std::size_t>(m.height) * m.width;
  m.distance.assign(n, std::numeric_limits<double>::infinity());
  m.tangent.assign(n, 0.0);
  m.edge.assign(n, -1);

  // Each segment only touches pixels inside its radius-expanded bounding box.
  for (std::size_t ei = 0; ei < graph.edges.size(); ++ei) {
    const auto& pl = graph.edges[ei].polyline;
    for (std::size_t s = 0; s + 1 < pl.size(); ++s) {
      const Point a = pl[s];
      const Point b = pl[s + 1];
      if (a == b) continue;
      const double theta = heading(b - a);
      const int c0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - radius - 0.5)));
      const int c1 = std::min(m.width - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + radius)));
      const int r0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - radius - 0.5)));
      const int r1 = std::min(m.height - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + radius)));
      for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
          const double d = point_segment_distance(pixel_center(r, c), a, b);
          if (d > radius) continue;
          const std::size_t idx = static_cast<std::size_t>(r) * m.width + c;
          if (d < m.distance[idx]) {
            m.distance[idx] = d;
            m.tangent[idx] = theta;
            m.edge[idx] = static_cast<std::int32_t>(ei);
          }
        }
      }
    }
  }
  return m;
}

}  // namespace rtk
