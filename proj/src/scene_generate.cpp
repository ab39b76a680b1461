#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "random.hpp"
#include "rtk/error.hpp"
#include "rtk/scene.hpp"
#include "rtk/topology.hpp"

namespace rtk {

std::string_view to_string(SceneTemplate t) {
  switch (t) {
    case SceneTemplate::straight: return "straight";
    case SceneTemplate::curve: return "curve";
    case SceneTemplate::fork: return "fork";
    case SceneTemplate::lane_split: return "lane_split";
    case SceneTemplate::four_way: return "four_way";
    case SceneTemplate::u_turn: return "u_turn";
  }
  return "straight";
}

SceneTemplate scene_template_from_string(std::string_view name) {
  for (SceneTemplate t : kAllTemplates) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scene template '" + std::string(name) + "'");
}

void NoiseSpec::validate() const {
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "dropout_prob must lie in [0, 1]");
  }
  if (!(intensity_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "intensity_sigma must be >= 0");
  if (occlusion_boxes < 0) throw Error(ErrorCode::InvalidArgument, "occlusion_boxes must be >= 0");
}

void SceneSpec::validate() const {
  grid.validate();
  noise.validate();
  if (!(lane_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "lane_width must be positive");
  if (!(curvature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "curvature must be >= 0");
}

namespace {

constexpr int kAttempts = 32;
constexpr double kDeg = std::numbers::pi / 180.0;

// Interior polyline coordinates are snapped to this grid so that anchor
// samples survive float32 storage and 6-decimal JSON exactly.
double snap(double x) { return std::round(x * 32.0) / 32.0; }

// Vertices at every integer row from `y0` down to `y1` (both integers,
// y0 > y1), with the endpoints pinned to the node positions.
std::vector<Point> trace(Point from, Point to, const std::function<double(double)>& x_at_row) {
  std::vector<Point> pl;
  pl.push_back(from);
  for (double y = from.y - 1.0; y > to.y; y -= 1.0) pl.push_back({snap(x_at_row(y)), y});
  pl.push_back(to);
  return pl;
}

class Builder {
 public:
  explicit Builder(const GridSpec& grid) { g_.grid = grid; }

  int node(double x, double y) {
    const int id = static_cast<int>(g_.nodes.size());
    g_.nodes.push_back({id, {x, y}, NodeKind::start});
    return id;
  }

  void edge(int from, int to, const std::function<double(double)>& x_at_row) {
    const Point a = g_.nodes[static_cast<std::size_t>(from)].position;
    const Point b = g_.nodes[static_cast<std::size_t>(to)].position;
    g_.edges.push_back({from, to, trace(a, b, x_at_row)});
  }

  LaneGraph finish() {
    recompute_kinds(g_);
    return g_;
  }

 private:
  LaneGraph g_;
};

struct Layout {
  double lane_px = 0.0;
  std::vector<double> centers;  // integer columns, left to right
  double y_bottom = 0.0;
  double y_top = 0.0;
};

// Lateral room a template needs beyond the outermost lane centers.
std::pair<double, double> template_margins(SceneTemplate t, double lane_px) {
  switch (t) {
    case SceneTemplate::fork: return {0.0, 1.3 * lane_px};
    case SceneTemplate::lane_split: return {lane_px, 0.0};
    case SceneTemplate::u_turn: return {1.1 * lane_px, 0.0};
    default: return {0.0, 0.0};
  }
}

Layout make_layout(const SceneSpec& spec, detail::SceneRng& rng) {
  const GridSpec& g = spec.grid;
  const int n = spec.lanes_per_direction;
  Layout lay;
  lay.lane_px = spec.lane_width / g.resolution;
  lay.y_bottom = g.height - 2;
  lay.y_top = 2;
  const auto [left_extra, right_extra] = template_margins(spec.layout, lay.lane_px);

  std::vector<int> feasible;
  for (int e = 0; e < n; ++e) {
    const double x0 = g.ego_col() - e * lay.lane_px;
    const double xn = g.ego_col() + (n - 1 - e) * lay.lane_px;
    if (x0 - lay.lane_px / 2.0 - left_extra >= 1.0 && xn + lay.lane_px / 2.0 + right_extra <= g.width - 1.0) {
      feasible.push_back(e);
    }
  }
  if (feasible.empty()) {
    throw Error(ErrorCode::TemplateOverflow, std::string(to_string(spec.layout)) + " with " +
                                                 std::to_string(n) + " lanes does not fit the grid");
  }
  const int ego_lane = feasible[rng.uniform_int(0, static_cast<int>(feasible.size()) - 1)];
  for (int i = 0; i < n; ++i) lay.centers.push_back(std::round(g.ego_col() + (i - ego_lane) * lay.lane_px));
  return lay;
}

// Smooth lateral ramp from 0 to `offset` over `length` rows.
double ramp(double rows_above, double offset, double length) {
  const double t = std::clamp(rows_above / length, 0.0, 1.0);
  return offset * 0.5 * (1.0 - std::cos(std::numbers::pi * t));
}

void straight_lane(Builder& b, const Layout& lay, double x) {
  const int s = b.node(x, lay.y_bottom);
  const int e = b.node(x, lay.y_top);
  b.edge(s, e, [x](double) { return x; });
}

void build_straight(Builder& b, const Layout& lay) {
  for (double x : lay.centers) straight_lane(b, lay, x);
}

void build_curve(Builder& b, const Layout& lay, const SceneSpec& spec, detail::SceneRng& rng) {
  const GridSpec& g = spec.grid;
  const double onset = g.ego_row - rng.uniform_int(10, 30);
  const double side = rng.uniform01() < 0.5 ? -1.0 : 1.0;
  const double radius = spec.curvature > 0.0 ? 1.0 / (spec.curvature * g.resolution)
                                             : std::numeric_limits<double>::infinity();
  auto offset = [radius](double rows) {
    return std::isinf(radius) ? 0.0 : radius - std::sqrt(radius * radius - rows * rows);
  };
  // Stop the curve before it turns past 60 degrees or leaves the grid.
  double span = onset - lay.y_top;
  if (!std::isinf(radius)) span = std::min(span, radius * std::sin(60.0 * kDeg));
  const double room = side > 0 ? (g.width - 2.0) - lay.centers.back() : lay.centers.front() - 1.0;
  while (span > 0 && offset(span) > room) span -= 1.0;
  span = std::floor(span);
  if (span < 16.0) throw Error(ErrorCode::TemplateOverflow, "curve leaves no room after its onset");

  for (double x : lay.centers) {
    const int s = b.node(x, lay.y_bottom);
    const int mid = b.node(x, onset);
    const int e = b.node(std::round(x + side * offset(span)), onset - span);
    b.edge(s, mid, [x](double) { return x; });
    b.edge(mid, e, [=](double y) { return x + side * offset(onset - y); });
  }
}

// A lane that forks at `split` into a straight branch and a ramped branch.
void forking_lane(Builder& b, const Layout& lay, double x, double split, double offset,
                  double length) {
  const int s = b.node(x, lay.y_bottom);
  const int f = b.node(x, split);
  const int straight_end = b.node(x, lay.y_top);
  const int ramp_end = b.node(std::round(x + ramp(split - lay.y_top, offset, length)), lay.y_top);
  b.edge(s, f, [x](double) { return x; });
  b.edge(f, straight_end, [x](double) { return x; });
  b.edge(f, ramp_end, [=](double y) { return x + ramp(split - y, offset, length); });
}

void build_fork(Builder& b, const Layout& lay, const SceneSpec& spec, detail::SceneRng& rng) {
  const double split = spec.grid.ego_row - rng.uniform_int(15, 40);
  const double x = lay.centers.back();
  double offset = lay.lane_px * (1.1 + 0.2 * rng.uniform01());
  offset = std::min(offset, (spec.grid.width - 2.0) - x);
  const double length = rng.uniform_int(35, 55);
  for (std::size_t i = 0; i + 1 < lay.centers.size(); ++i) straight_lane(b, lay, lay.centers[i]);
  forking_lane(b, lay, x, split, offset, length);
}

void build_lane_split(Builder& b, const Layout& lay, const SceneSpec& spec, detail::SceneRng& rng) {
  const double split = spec.grid.ego_row - rng.uniform_int(15, 40);
  const double length = rng.uniform_int(25, 40);
  forking_lane(b, lay, lay.centers.front(), split, -lay.lane_px, length);
  for (std::size_t i = 1; i < lay.centers.size(); ++i) straight_lane(b, lay, lay.centers[i]);
}

// Circular turn leaving a lane heading up. `side` is -1 for left, +1 for right.
struct Turn {
  double side = 0.0;
  double radius = 0.0;
  double max_angle = 80.0 * kDeg;
};

double turn_offset(const Turn& t, double rows_above) {
  const double s = rows_above / t.radius;
  return t.side * t.radius * (1.0 - std::sqrt(std::max(0.0, 1.0 - s * s)));
}

std::optional<Point> turn_end(const Turn& t, double x, double split, const GridSpec& g) {
  const double rows = std::floor(t.radius * std::sin(t.max_angle));
  const Point end{std::round(x + turn_offset(t, rows)), split - rows};
  if (end.x < 1.0 || end.x > g.width - 2.0 || end.y < 1.0) return std::nullopt;
  return end;
}

void turning_lane(Builder& b, const Layout& lay, double x, double split, const std::vector<Turn>& turns,
                  const GridSpec& g) {
  const int s = b.node(x, lay.y_bottom);
  if (turns.empty()) {
    const int e = b.node(x, lay.y_top);
    b.edge(s, e, [x](double) { return x; });
    return;
  }
  const int f = b.node(x, split);
  b.edge(s, f, [x](double) { return x; });
  const int straight_end = b.node(x, lay.y_top);
  b.edge(f, straight_end, [x](double) { return x; });
  for (const Turn& t : turns) {
    const Point end = *turn_end(t, x, split, g);
    const int e = b.node(end.x, end.y);
    b.edge(f, e, [=](double y) { return x + turn_offset(t, split - y); });
  }
}

void build_four_way(Builder& b, const Layout& lay, const SceneSpec& spec, detail::SceneRng& rng) {
  const GridSpec& g = spec.grid;
  const int n = static_cast<int>(lay.centers.size());
  const double split = g.ego_row - rng.uniform_int(20, 35);
  const double left_radius = lay.lane_px * (1.2 + 0.8 * rng.uniform01());
  const double right_radius = lay.lane_px * (0.8 + 0.6 * rng.uniform01());

  std::vector<std::vector<Turn>> turns(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = lay.centers[static_cast<std::size_t>(i)];
    if (2 * i < n && rng.uniform01() < 0.75) {
      Turn t{-1.0, left_radius + (x - lay.centers.front())};
      if (turn_end(t, x, split, g)) turns[static_cast<std::size_t>(i)].push_back(t);
    }
    if (2 * i >= n - 1 && rng.uniform01() < 0.75) {
      Turn t{1.0, right_radius + (lay.centers.back() - x)};
      if (turn_end(t, x, split, g)) turns[static_cast<std::size_t>(i)].push_back(t);
    }
  }
  auto count = [&] {
    int k = 0;
    for (const auto& ts : turns) k += ts.empty() ? 2 : 3 + static_cast<int>(ts.size());
    return k;
  };
  // Drop turns from the right until the keypoint budget is met.
  for (int i = n - 1; i >= 0 && count() > kMaxSceneKeypoints; --i) {
    while (!turns[static_cast<std::size_t>(i)].empty() && count() > kMaxSceneKeypoints) {
      turns[static_cast<std::size_t>(i)].pop_back();
    }
  }
  for (int i = 0; i < n; ++i) {
    turning_lane(b, lay, lay.centers[static_cast<std::size_t>(i)], split, turns[static_cast<std::size_t>(i)], g);
  }
}

void build_u_turn(Builder& b, const Layout& lay, const SceneSpec& spec, detail::SceneRng& rng) {
  const GridSpec& g = spec.grid;
  const double split = g.ego_row - rng.uniform_int(20, 35);
  // Only the forward half of the U is in scope; it ends at the apex.
  Turn u{-1.0, lay.lane_px * (0.9 + 0.2 * rng.uniform01()), 85.0 * kDeg};
  if (!turn_end(u, lay.centers.front(), split, g)) {
    throw Error(ErrorCode::TemplateOverflow, "u-turn does not fit left of the lanes");
  }
  turning_lane(b, lay, lay.centers.front(), split, {u}, g);
  for (std::size_t i = 1; i < lay.centers.size(); ++i) straight_lane(b, lay, lay.centers[i]);
}

bool distinct_cells(const LaneGraph& g) {
  std::set<std::pair<int, int>> cells;
  for (const auto& n : g.nodes) {
    const int r = static_cast<int>(std::floor(n.position.y / g.grid.keypoint_cell));
    const int c = static_cast<int>(std::floor(n.position.x / g.grid.keypoint_cell));
    if (!cells.emplace(r, c).second) return false;
  }
  return true;
}

bool acceptable(const LaneGraph& g, const Pose2& ego) {
  if (static_cast<int>(g.nodes.size()) > kMaxSceneKeypoints) return false;
  if (!validate_graph(g).empty()) return false;
  if (!distinct_cells(g)) return false;
  try {
    if (!structurally_equal(scope_filter(g, ego), g)) return false;
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace

std::pair<LaneGraph, Pose2> generate_scene(const SceneSpec& spec) {
  spec.validate();
  if (spec.lanes_per_direction < 1 || spec.lanes_per_direction > 4) {
    throw Error(ErrorCode::TemplateOverflow, "lanes_per_direction must lie in 1..4");
  }
  const Pose2 ego = Pose2::ego();
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    detail::SceneRng rng(detail::mix_seed(spec.seed, 0x9e0ULL + static_cast<std::uint64_t>(attempt)));
    const Layout lay = make_layout(spec, rng);
    Builder b(spec.grid);
    switch (spec.layout) {
      case SceneTemplate::straight: build_straight(b, lay); break;
      case SceneTemplate::curve: build_curve(b, lay, spec, rng); break;
      case SceneTemplate::fork: build_fork(b, lay, spec, rng); break;
      case SceneTemplate::lane_split: build_lane_split(b, lay, spec, rng); break;
      case SceneTemplate::four_way: build_four_way(b, lay, spec, rng); break;
      case SceneTemplate::u_turn: build_u_turn(b, lay, spec, rng); break;
    }
    LaneGraph g = b.finish();
    if (acceptable(g, ego)) return {std::move(g), ego};
  }
  throw Error(ErrorCode::TemplateOverflow,
              std::string(to_string(spec.layout)) + " could not be laid out without keypoint collisions");
}

}  // namespace rtk
