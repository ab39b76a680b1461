#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rtk/geometry.hpp"

namespace rtk {

/// Raster layout shared by every tensor of a scene.
struct GridSpec {
  int height = 128;
  int width = 128;
  double resolution = 0.26;  // meters per pixel
  int keypoint_cell = 8;     // pixels per keypoint-grid cell edge
  int ego_row = 96;

  /// Square grid with the ego anchored at 3/4 of the image height.
  static GridSpec square(int size, double resolution = 0.26, int keypoint_cell = 8);

  int cell_rows() const noexcept { return height / keypoint_cell; }
  int cell_cols() const noexcept { return width / keypoint_cell; }
  double ego_col() const noexcept { return width / 2.0; }
  bool contains(Point p) const noexcept {
    return p.x >= 0.0 && p.y >= 0.0 && p.x < width && p.y < height;
  }

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Metric pose in the ego frame: origin at the ego anchor pixel, x to the
/// right, y forward (up in the image). yaw uses the same convention as
/// heading(): pi/2 points up.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Pose2() = default;
  Pose2(double x_m, double y_m, double yaw_rad) : x(x_m), y(y_m), yaw(normalize_angle(yaw_rad)) {}

  /// The ego itself: at the anchor pixel, heading up.
  static Pose2 ego() { return {0.0, 0.0, std::numbers::pi / 2.0}; }
};

Point pose_to_pixel(const GridSpec& grid, const Pose2& pose);

enum class NodeKind : std::uint8_t { start, fork, end };

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view name);

struct LaneNode {
  int id = 0;
  Point position;
  NodeKind kind = NodeKind::start;
};

struct LaneEdge {
  int from = 0;
  int to = 0;
  std::vector<Point> polyline;
};

struct LaneGraph {
  std::vector<LaneNode> nodes;
  std::vector<LaneEdge> edges;
  GridSpec grid;

  /// Index into `nodes` for a node id, or -1.
  int node_index(int id) const;
  const LaneNode& node(int id) const;

  std::unordered_map<int, int> in_degrees() const;
  std::unordered_map<int, int> out_degrees() const;
};

/// Relabels node kinds from degrees: in-degree 0 -> start, out-degree 0 ->
/// end, everything else (forks, merges, pass-through) -> fork.
void recompute_kinds(LaneGraph& graph);

enum class DiagnosticKind : std::uint8_t {
  DuplicateNodeId,
  NodeOutOfBounds,
  MissingNode,
  SelfLoop,
  DuplicateEdge,
  ShortPolyline,
  EndpointMismatch,
  NonMonotonePolyline,
  Cycle,
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  int node_id = -1;
  int edge_index = -1;
  std::string message;
};

/// Lists every violated LaneGraph / LaneEdge invariant; empty when valid.
std::vector<Diagnostic> validate_graph(const LaneGraph& graph);

/// Same nodes (by position and kind) and same edges (by endpoint positions and
/// polylines), ignoring node ids and element order.
bool structurally_equal(const LaneGraph& a, const LaneGraph& b, double tolerance = 1e-9);

}  // namespace rtk
