#include "rtk/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "rtk/error.hpp"

namespace rtk {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kLateralReachLanes = 1.5;

}  // namespace

bool acute_to_yaw(const LaneEdge& edge, double yaw) {
  return edge.polyline.size() >= 2 && angdiff(mean_tangent(edge.polyline), yaw) < kHalfPi;
}

LaneGraph scope_filter(const LaneGraph& graph, const Pose2& ego) {
  const Point ego_px = pose_to_pixel(graph.grid, ego);
  if (!graph.grid.contains(ego_px)) throw Error(ErrorCode::InvalidArgument, "ego outside the grid");
  if (graph.edges.empty()) throw Error(ErrorCode::InvalidArgument, "graph has no lane segments");

  const std::size_t n = graph.edges.size();
  std::vector<bool> acute(n);
  for (std::size_t i = 0; i < n; ++i) acute[i] = acute_to_yaw(graph.edges[i], ego.yaw);

  // Ego's lane: nearest acute edge, ties broken by alignment with the yaw.
  std::size_t ego_edge = n;
  double best_dist = std::numeric_limits<double>::infinity();
  double best_diff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!acute[i]) continue;
    const auto& pl = graph.edges[i].polyline;
    const double d = project_onto_polyline(pl, ego_px).distance;
    const double diff = angdiff(mean_tangent(pl), ego.yaw);
    if (d < best_dist || (d == best_dist && diff < best_diff)) {
      ego_edge = i;
      best_dist = d;
      best_diff = diff;
    }
  }
  const double lane_px = kLaneWidthMeters / graph.grid.resolution;
  if (ego_edge == n || best_dist > lane_px) {
    throw Error(ErrorCode::NoLaneNearEgo, "no acute-angle lane within one lane width of the ego");
  }

  std::vector<bool> reached(n, false);
  std::deque<std::size_t> frontier{ego_edge};
  reached[ego_edge] = true;
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    const auto& ce = graph.edges[cur];
    for (std::size_t j = 0; j < n; ++j) {
      if (reached[j] || !acute[j]) continue;
      const auto& cand = graph.edges[j];
      const bool forward = cand.from == ce.to;
      const bool lateral =
          !forward && polylines_within(ce.polyline, cand.polyline, kLateralReachLanes * lane_px);
      if (forward || lateral) {
        reached[j] = true;
        frontier.push_back(j);
      }
    }
  }

  LaneGraph out;
  out.grid = graph.grid;
  std::set<int> keep;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reached[i]) continue;
    out.edges.push_back(graph.edges[i]);
    keep.insert(graph.edges[i].from);
    keep.insert(graph.edges[i].to);
  }
  for (const auto& node : graph.nodes) {
    if (keep.contains(node.id)) out.nodes.push_back(node);
  }
  return out;
}

namespace {

bool has_pair(const std::vector<LaneEdge>& edges, int from, int to) {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const LaneEdge& e) { return e.from == from && e.to == to; });
}

// Moves polyline endpoints onto new node positions, dropping interior points
// that would break row monotonicity.
void reattach(LaneEdge& edge, Point from_pos, Point to_pos) {
  std::vector<Point> pl;
  pl.reserve(edge.polyline.size());
  pl.push_back(from_pos);
  for (std::size_t i = 1; i + 1 < edge.polyline.size(); ++i) {
    const Point p = edge.polyline[i];
    if (p.y < from_pos.y && p.y > to_pos.y) pl.push_back(p);
  }
  pl.push_back(to_pos);
  edge.polyline = std::move(pl);
}

// One pass of the one-keypoint-per-cell rule. Returns true if anything merged.
bool merge_cells(LaneGraph& g, MergePolicy policy) {
  const int cell = g.grid.keypoint_cell;
  std::map<std::pair<long, long>, std::vector<std::size_t>> groups;
  std::vector<std::pair<long, long>> order;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const Point p = g.nodes[i].position;
    const std::pair<long, long> key{static_cast<long>(std::floor(p.y / cell)),
                                    static_cast<long>(std::floor(p.x / cell))};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(i);
  }
  if (groups.size() == g.nodes.size()) return false;

  std::map<int, int> rep;            // member id -> representative id
  std::map<int, Point> moved;        // representative id -> new position
  std::vector<LaneNode> nodes;
  for (const auto& key : order) {
    const auto& members = groups[key];
    LaneNode head = g.nodes[members.front()];
    for (std::size_t m : members) rep[g.nodes[m].id] = head.id;
    if (members.size() > 1) {
      if (policy == MergePolicy::average) {
        Point sum;
        for (std::size_t m : members) sum = sum + g.nodes[m].position;
        head.position = (1.0 / static_cast<double>(members.size())) * sum;
      }
      moved[head.id] = head.position;
    }
    nodes.push_back(head);
  }

  std::vector<LaneEdge> edges;
  for (LaneEdge e : g.edges) {
    const bool touched = rep[e.from] != e.from || rep[e.to] != e.to || moved.contains(e.from) ||
                         moved.contains(e.to);
    e.from = rep[e.from];
    e.to = rep[e.to];
    if (e.from == e.to) {
      throw Error(ErrorCode::MergeCollision,
                  "merging keypoints collapses an edge onto node " + std::to_string(e.from));
    }
    if (has_pair(edges, e.from, e.to)) continue;
    if (touched) {
      Point from_pos, to_pos;
      for (const auto& nd : nodes) {
        if (nd.id == e.from) from_pos = nd.position;
        if (nd.id == e.to) to_pos = nd.position;
      }
      if (!(from_pos.y > to_pos.y)) {
        throw Error(ErrorCode::MergeCollision,
                    "merged keypoints leave an edge without forward (upward) extent");
      }
      reattach(e, from_pos, to_pos);
    }
    edges.push_back(std::move(e));
  }
  g.nodes = std::move(nodes);
  g.edges = std::move(edges);
  return true;
}

// Splices out the first pass-through node found. Returns true if one was removed.
bool splice_one(LaneGraph& g) {
  const auto in = g.in_degrees();
  const auto out = g.out_degrees();
  for (std::size_t ni = 0; ni < g.nodes.size(); ++ni) {
    const int id = g.nodes[ni].id;
    if (in.at(id) != 1 || out.at(id) != 1) continue;

    std::size_t ie = 0, oe = 0;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (g.edges[k].to == id) ie = k;
      if (g.edges[k].from == id) oe = k;
    }
    LaneEdge joined{g.edges[ie].from, g.edges[oe].to, g.edges[ie].polyline};
    if (joined.from == joined.to) {
      throw Error(ErrorCode::MergeCollision, "splicing node " + std::to_string(id) + " closes a loop");
    }
    const auto& tail = g.edges[oe].polyline;
    joined.polyline.insert(joined.polyline.end(), tail.begin() + 1, tail.end());

    std::vector<LaneEdge> edges;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (k == oe) continue;
      if (k == ie) {
        if (!has_pair(g.edges, joined.from, joined.to)) edges.push_back(joined);
        continue;
      }
      edges.push_back(g.edges[k]);
    }
    g.edges = std::move(edges);
    g.nodes.erase(g.nodes.begin() + static_cast<std::ptrdiff_t>(ni));
    return true;
  }
  return false;
}

}  // namespace

LaneGraph prune_graph(const LaneGraph& graph, MergePolicy policy) {
  LaneGraph g = graph;
  bool changed = true;
  while (changed) {
    changed = merge_cells(g, policy);
    while (splice_one(g)) changed = true;
  }
  recompute_kinds(g);
  return g;
}

}  // namespace rtk
