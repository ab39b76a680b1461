#pragma once

#include "rtk/lane_graph.hpp"

namespace rtk {

/// Standard US lane width, used to bound the ego-to-lane association.
inline constexpr double kLaneWidthMeters = 3.65;

/// Restricts a lane graph to the ego's drivable scope: lane segments whose
/// mean tangent forms an acute angle with the ego yaw and that are reachable
/// from the ego's current lane by moving forward or changing to an adjacent
/// (within 1.5 lane widths) lane. Throws NoLaneNearEgo when no acute-angle
/// lane lies within one lane width of the ego.
LaneGraph scope_filter(const LaneGraph& graph, const Pose2& ego);

/// True when the edge's mean tangent is within 90 degrees of `yaw`.
bool acute_to_yaw(const LaneEdge& edge, double yaw);

enum class MergePolicy { first, average };

/// Canonicalizes a scoped graph: keeps one keypoint per keypoint-grid cell and
/// splices out nodes with exactly one incoming and one outgoing edge, until
/// neither rule applies. Node kinds are recomputed from degrees.
LaneGraph prune_graph(const LaneGraph& graph, MergePolicy policy = MergePolicy::average);

}  // namespace rtk
