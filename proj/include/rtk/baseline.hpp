#pragma once

#include <vector>

#include "rtk/encoders.hpp"
#include "rtk/lane_graph.hpp"
#include "rtk/raster.hpp"

namespace rtk {

inline constexpr double kDefaultDistanceThreshold = 0.6;

/// Converts the inverse distance field (1 on reference lines) into the
/// distance-like cost the shortest-path search expects: cost = 1 - R.
Raster to_cost_image(const Raster& R);

/// Forward-biased pixel graph over a cost image. Moves are left, top-left,
/// top, top-right and right; a move exists when both pixels are traversable
/// and costs the destination pixel's value.
class PixelGraph {
 public:
  PixelGraph(Raster cost, double threshold);

  int height() const noexcept { return cost_.height(); }
  int width() const noexcept { return cost_.width(); }
  double cost(int row, int col) const { return cost_.at(row, col); }
  bool traversable(int row, int col) const;

  struct Path {
    double cost = 0.0;
    std::vector<Cell> pixels;  // source first
  };

  /// Shortest paths from `source` to each target pixel (nullopt-like empty
  /// pixels vector when unreachable). Ties are broken by (cost, length,
  /// pixel index).
  std::vector<Path> shortest_paths(Cell source, const std::vector<Cell>& targets) const;

 private:
  Raster cost_;
  double threshold_;
};

struct BaselineConnection {
  int from = 0;  // keypoint index (lower in the image)
  int to = 0;
  double cost = 0.0;
  std::size_t length = 0;
  AnchorLine line;
};

struct BaselineResult {
  std::vector<BaselineConnection> candidates;   // every feasible ordered pair
  std::vector<BaselineConnection> connections;  // minimum spanning forest
};

/// Shortest-path connectivity baseline over the inverse distance field R.
/// Only pixels with R >= dt are traversable.
BaselineResult baseline_predict(const Raster& R, const std::vector<Point>& keypoints, double dt,
                                int anchor_step = 4);

/// Lane graph with one node per keypoint (id = index) and the surviving
/// connections as anchor-sampled polylines.
LaneGraph baseline_graph(const BaselineResult& result, const std::vector<Point>& keypoints,
                         const GridSpec& grid);

}  // namespace rtk
