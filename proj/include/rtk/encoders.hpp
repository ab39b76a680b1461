#pragma once

#include <array>
#include <compare>
#include <vector>

#include "rtk/lane_graph.hpp"
#include "rtk/raster.hpp"

namespace rtk {

struct EncoderConfig {
  double truncation_px = 14.0;  // ~one lane width at 0.26 m/px
  int anchor_step_px = 4;
  int n_max = 16;   // keypoints (and connections) per dense affinity
  int n_rmax = 30;  // interior anchor slots per reference line

  int max_anchors() const noexcept { return n_rmax + 2; }
  void validate() const;
};

/// Stage-1 targets: truncated inverse distance R, lane direction D and
/// perpendicular direction P (both HSV-coded as RGB).
struct FieldSet {
  Raster R;  // H x W x 1
  Raster D;  // H x W x 3
  Raster P;  // H x W x 3
  double truncation_px = 14.0;
};

/// Standard hexcone HSV -> RGB, all components in [0, 1].
std::array<float, 3> hsv_to_rgb(double h, double s, double v);
/// Hue in [0, 1) of an RGB triple; 0 for greys.
double rgb_to_hue(double r, double g, double b);

Raster encode_distance_field(const LaneGraph& graph, const EncoderConfig& cfg);
Raster encode_direction_field(const LaneGraph& graph, const EncoderConfig& cfg);
Raster encode_perp_field(const LaneGraph& graph, const EncoderConfig& cfg);
/// All three fields from one nearest-line pass.
FieldSet encode_fields(const LaneGraph& graph, const EncoderConfig& cfg);

struct Cell {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

Cell cell_of(Point p, int cell_px);

/// H' x W' x 3 grid of (confidence, dx, dy); offsets are fractions of a cell.
struct KeypointGrid {
  Raster tensor;
  int cell_px = 8;

  float confidence(int row, int col) const { return tensor.at(row, col, 0); }
};

/// Throws CellCollision when two nodes share a cell (unpruned input).
KeypointGrid encode_keypoint_grid(const LaneGraph& graph, const EncoderConfig& cfg);

/// Reference line sampled at fixed row intervals between two keypoints.
/// Rows and xs are in pixels; the affinity tensor stores xs normalized by W.
struct AnchorLine {
  int from_kp = -1;
  int to_kp = -1;
  int step = 4;
  std::vector<double> rows;
  std::vector<double> xs;
};

/// Rows from_y, from_y - step, ... while still above to_y, then to_y itself.
std::vector<double> anchor_rows(double from_y, double to_y, int step);

/// Throws AnchorOverflow if more than n_rmax + 2 anchors are needed.
AnchorLine resample_reference_line(const LaneEdge& edge, const EncoderConfig& cfg);

/// Dense N_max x N_max affinity. conf[i][j] is the confidence of travel from
/// keypoint i to keypoint j; lines[i][j] holds the valid anchor count divided
/// by (n_rmax + 2) in channel 0 and the interior anchor xs / W in channels
/// 1..n_rmax. kp_index maps dense indices to keypoint-grid cells.
struct DenseAffinity {
  Raster conf;   // N x N x 1
  Raster lines;  // N x N x (n_rmax + 1)
  std::vector<Cell> kp_index;
  int n_max = 16;
  int n_rmax = 30;

  DenseAffinity() = default;
  explicit DenseAffinity(const EncoderConfig& cfg);
};

DenseAffinity encode_affinity(const LaneGraph& graph, const KeypointGrid& kp_grid, const EncoderConfig& cfg);

struct DecodedKeypoint {
  Cell cell;
  Point position;
  float confidence = 0.0f;
};

/// Common indexing frame between predicted and ground-truth keypoints.
struct AffinityAlignment {
  std::vector<Cell> pred_cells;  // predicted dense index -> cell
  std::vector<Cell> gt_cells;    // ground-truth dense index -> cell (row-major)
  std::vector<int> pred_to_gt;   // -1 for spurious predictions
  std::vector<int> gt_to_pred;   // -1 for missed keypoints
};

AffinityAlignment align_affinity(const std::vector<DecodedKeypoint>& pred_kps, const LaneGraph& gt_graph,
                                 const EncoderConfig& cfg);

/// Ground-truth keypoint cells in row-major order, as used by encode_affinity.
std::vector<Cell> graph_cells(const LaneGraph& graph);

}  // namespace rtk
