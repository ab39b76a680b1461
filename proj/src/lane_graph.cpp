#include "rtk/lane_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <tuple>
#include <utility>

#include "rtk/error.hpp"

namespace rtk {

GridSpec GridSpec::square(int size, double resolution, int keypoint_cell) {
  GridSpec g;
  g.height = size;
  g.width = size;
  g.resolution = resolution;
  g.keypoint_cell = keypoint_cell;
  g.ego_row = static_cast<int>(std::lround(0.75 * size));
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (height <= 0 || width <= 0) throw Error(ErrorCode::InvalidArgument, "grid size must be positive");
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  if (keypoint_cell <= 0 || height % keypoint_cell != 0 || width % keypoint_cell != 0) {
    throw Error(ErrorCode::InvalidArgument, "grid size must be a multiple of the keypoint cell");
  }
  if (ego_row != std::lround(0.75 * height)) {
    throw Error(ErrorCode::InvalidArgument, "ego_row must equal round(0.75 * height)");
  }
}

Point pose_to_pixel(const GridSpec& grid, const Pose2& pose) {
  return {grid.ego_col() + pose.x / grid.resolution, grid.ego_row - pose.y / grid.resolution};
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::start: return "start";
    case NodeKind::fork: return "fork";
    case NodeKind::end: return "end";
  }
  return "fork";
}

NodeKind node_kind_from_string(std::string_view name) {
  if (name == "start") return NodeKind::start;
  if (name == "fork") return NodeKind::fork;
  if (name == "end") return NodeKind::end;
  throw Error(ErrorCode::SchemaViolation, "unknown node kind '" + std::string(name) + "'");
}

int LaneGraph::node_index(int id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

const LaneNode& LaneGraph::node(int id) const {
  const int idx = node_index(id);
  if (idx < 0) throw Error(ErrorCode::InvalidArgument, "no node with id " + std::to_string(id));
  return nodes[static_cast<std::size_t>(idx)];
}

std::unordered_map<int, int> LaneGraph::in_degrees() const {
  std::unordered_map<int, int> deg;
  for (const auto& n : nodes) deg[n.id] = 0;
  for (const auto& e : edges) ++deg[e.to];
  return deg;
}

std::unordered_map<int, int> LaneGraph::out_degrees() const {
  std::unordered_map<int, int> deg;
  for (const auto& n : nodes) deg[n.id] = 0;
  for (const auto& e : edges) ++deg[e.from];
  return deg;
}

void recompute_kinds(LaneGraph& graph) {
  const auto in = graph.in_degrees();
  const auto out = graph.out_degrees();
  for (auto& n : graph.nodes) {
    if (in.at(n.id) == 0) {
      n.kind = NodeKind::start;
    } else if (out.at(n.id) == 0) {
      n.kind = NodeKind::end;
    } else {
      n.kind = NodeKind::fork;
    }
  }
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::DuplicateNodeId: return "DuplicateNodeId";
    case DiagnosticKind::NodeOutOfBounds: return "NodeOutOfBounds";
    case DiagnosticKind::MissingNode: return "MissingNode";
    case DiagnosticKind::SelfLoop: return "SelfLoop";
    case DiagnosticKind::DuplicateEdge: return "DuplicateEdge";
    case DiagnosticKind::ShortPolyline: return "ShortPolyline";
    case DiagnosticKind::EndpointMismatch: return "EndpointMismatch";
    case DiagnosticKind::NonMonotonePolyline: return "NonMonotonePolyline";
    case DiagnosticKind::Cycle: return "Cycle";
  }
  return "Unknown";
}

namespace {

constexpr double kEndpointTolerance = 1e-6;

bool has_cycle(const LaneGraph& g) {
  std::unordered_map<int, int> indeg;
  std::unordered_map<int, std::vector<int>> succ;
  for (const auto& n : g.nodes) indeg[n.id] = 0;
  for (const auto& e : g.edges) {
    if (!indeg.contains(e.from) || !indeg.contains(e.to)) continue;
    ++indeg[e.to];
    succ[e.from].push_back(e.to);
  }
  std::queue<int> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.push(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const int id = ready.front();
    ready.pop();
    ++visited;
    for (int next : succ[id]) {
      if (--indeg[next] == 0) ready.push(next);
    }
  }
  return visited != indeg.size();
}

}  // namespace

std::vector<Diagnostic> validate_graph(const LaneGraph& graph) {
  std::vector<Diagnostic> out;
  auto report = [&out](DiagnosticKind kind, int node, int edge, std::string msg) {
    out.push_back({kind, node, edge, std::move(msg)});
  };

  std::set<int> ids;
  for (const auto& n : graph.nodes) {
    if (!ids.insert(n.id).second) {
      report(DiagnosticKind::DuplicateNodeId, n.id, -1, "node id appears more than once");
    }
    if (!graph.grid.contains(n.position)) {
      report(DiagnosticKind::NodeOutOfBounds, n.id, -1, "node position outside the grid");
    }
  }

  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    const int ei = static_cast<int>(i);
    const int from_idx = graph.node_index(e.from);
    const int to_idx = graph.node_index(e.to);
    if (from_idx < 0) report(DiagnosticKind::MissingNode, e.from, ei, "edge source does not exist");
    if (to_idx < 0) report(DiagnosticKind::MissingNode, e.to, ei, "edge target does not exist");
    if (e.from == e.to) report(DiagnosticKind::SelfLoop, e.from, ei, "edge starts and ends at the same node");
    if (!pairs.emplace(e.from, e.to).second) {
      report(DiagnosticKind::DuplicateEdge, -1, ei, "duplicate (from, to) pair");
    }
    if (e.polyline.size() < 2) {
      report(DiagnosticKind::ShortPolyline, -1, ei, "polyline needs at least two points");
      continue;
    }
    if (from_idx >= 0 &&
        distance(e.polyline.front(), graph.nodes[static_cast<std::size_t>(from_idx)].position) >
            kEndpointTolerance) {
      report(DiagnosticKind::EndpointMismatch, e.from, ei, "polyline start differs from source node");
    }
    if (to_idx >= 0 &&
        distance(e.polyline.back(), graph.nodes[static_cast<std::size_t>(to_idx)].position) >
            kEndpointTolerance) {
      report(DiagnosticKind::EndpointMismatch, e.to, ei, "polyline end differs from target node");
    }
    if (!strictly_row_decreasing(e.polyline)) {
      report(DiagnosticKind::NonMonotonePolyline, -1, ei, "polyline rows must strictly decrease");
    }
  }

  if (has_cycle(graph)) report(DiagnosticKind::Cycle, -1, -1, "graph contains a directed cycle");
  return out;
}

namespace {

using NodeKey = std::tuple<double, double, int>;

std::vector<NodeKey> sorted_nodes(const LaneGraph& g) {
  std::vector<NodeKey> keys;
  for (const auto& n : g.nodes) keys.emplace_back(n.position.x, n.position.y, static_cast<int>(n.kind));
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

bool structurally_equal(const LaneGraph& a, const LaneGraph& b, double tolerance) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  if (!(a.grid == b.grid)) return false;

  const auto ka = sorted_nodes(a);
  const auto kb = sorted_nodes(b);
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (std::fabs(std::get<0>(ka[i]) - std::get<0>(kb[i])) > tolerance ||
        std::fabs(std::get<1>(ka[i]) - std::get<1>(kb[i])) > tolerance ||
        std::get<2>(ka[i]) != std::get<2>(kb[i])) {
      return false;
    }
  }

  // Edges are compared by their polylines, whose endpoints are the node positions.
  auto edge_order = [](const LaneGraph& g) {
    std::vector<const LaneEdge*> es;
    for (const auto& e : g.edges) es.push_back(&e);
    std::sort(es.begin(), es.end(), [&g](const LaneEdge* l, const LaneEdge* r) {
      const Point lf = g.node(l->from).position, lt = g.node(l->to).position;
      const Point rf = g.node(r->from).position, rt = g.node(r->to).position;
      return std::tie(lf.x, lf.y, lt.x, lt.y) < std::tie(rf.x, rf.y, rt.x, rt.y);
    });
    return es;
  };
  const auto ea = edge_order(a);
  const auto eb = edge_order(b);
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (distance(a.node(ea[i]->from).position, b.node(eb[i]->from).position) > tolerance ||
        distance(a.node(ea[i]->to).position, b.node(eb[i]->to).position) > tolerance) {
      return false;
    }
    const auto& pa = ea[i]->polyline;
    const auto& pb = eb[i]->polyline;
    if (pa.size() != pb.size()) return false;
    for (std::size_t k = 0; k < pa.size(); ++k) {
      if (distance(pa[k], pb[k]) > tolerance) return false;
    }
  }
  return true;
}

}  // namespace rtk
