#pragma once

#include <cstdint>
#include <vector>

#include "rtk/lane_graph.hpp"

namespace rtk {

/// Per-pixel nearest reference-line lookup, restricted to a search radius.
/// Pixels farther than the radius from every polyline keep distance = +inf.
struct DistanceMap {
  int height = 0;
  int width = 0;
  std::vector<double> distance;  // row-major, pixel centers
  std::vector<double> tangent;   // heading of the nearest segment
  std::vector<std::int32_t> edge;  // index of the nearest edge, -1 if none

  double at(int row, int col) const { return distance[static_cast<std::size_t>(row) * width + col]; }
  double tangent_at(int row, int col) const {
    return tangent[static_cast<std::size_t>(row) * width + col];
  }
};

DistanceMap compute_distance_map(const LaneGraph& graph, double radius);

}  // namespace rtk
