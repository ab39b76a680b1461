#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "rtk/lane_graph.hpp"
#include "rtk/raster.hpp"

namespace rtk {

enum class SceneTemplate : std::uint8_t { straight, curve, fork, lane_split, four_way, u_turn };

inline constexpr SceneTemplate kAllTemplates[] = {
    SceneTemplate::straight,   SceneTemplate::curve,    SceneTemplate::fork,
    SceneTemplate::lane_split, SceneTemplate::four_way, SceneTemplate::u_turn};

std::string_view to_string(SceneTemplate t);
SceneTemplate scene_template_from_string(std::string_view name);

struct NoiseSpec {
  double dropout_prob = 0.0;     // per-pixel probability that nothing is observed
  double intensity_sigma = 0.0;  // additive gaussian noise on lidar intensity
  int occlusion_boxes = 0;       // random occluding rectangles

  void validate() const;
};

struct SceneSpec {
  std::uint64_t seed = 0;
  SceneTemplate layout = SceneTemplate::straight;
  int lanes_per_direction = 1;
  double lane_width = 3.65;  // meters
  double curvature = 0.01;   // 1/meters, curve template only
  NoiseSpec noise;
  GridSpec grid;

  void validate() const;
};

/// Upper bound on keypoints in any generated scene.
inline constexpr int kMaxSceneKeypoints = 15;

/// Procedurally builds a lane graph in the ego pixel frame (ego at column
/// W/2 and row ego_row, heading up). The result is already in scope, has
/// strictly row-monotone polylines, integer node positions and at most 15
/// keypoints. Pure function of `spec`. Throws TemplateOverflow if the layout
/// does not fit the grid.
std::pair<LaneGraph, Pose2> generate_scene(const SceneSpec& spec);

/// Dempster-Shafer mass over the frame {occupied, free}.
struct MassFunction {
  double occupied = 0.0;
  double free = 0.0;
  double unknown = 1.0;

  static MassFunction vacuous() { return {0.0, 0.0, 1.0}; }
  bool valid(double tolerance = 1e-9) const;

  friend bool operator==(const MassFunction&, const MassFunction&) = default;
};

/// Dempster's rule of combination; throws TotalConflict when the conflict
/// mass reaches 1.
MassFunction ds_combine(const MassFunction& a, const MassFunction& b);

/// Exported occupancy value: pignistic probability occupied + unknown / 2, or
/// 0 for pixels without any evidence.
float occupancy_value(const MassFunction& m);

/// Multi-channel bird's-eye-view input raster.
struct BevGrid {
  GridSpec grid;
  Raster occupancy;         // H x W x 1, exported pignistic occupancy
  Raster ground_semantics;  // H x W x 3: road, sidewalk, terrain
  Raster ground_markings;   // H x W x 1
  Raster lidar_intensity;   // H x W x 1
  std::vector<MassFunction> occupancy_mass;  // H x W evidence behind `occupancy`

  explicit BevGrid(const GridSpec& spec = {});
};

/// Per-pixel observation mask (1 = observed) produced by the spec's noise:
/// pixels hit by dropout or covered by an occlusion box are unobserved.
Raster observation_mask(const SceneSpec& spec);

BevGrid rasterize_channels(const LaneGraph& graph, const SceneSpec& spec);

/// Fuses frames into the last frame's coordinates. Each pose maps frame-k
/// ego coordinates into the final frame. Occupancy evidence is combined with
/// Dempster's rule, the remaining channels with a per-pixel max; resampling
/// is nearest-neighbour.
BevGrid accumulate_temporal(const std::vector<std::pair<BevGrid, Pose2>>& frames);

}  // namespace rtk
