#include "rtk/baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "rtk/error.hpp"

namespace rtk {

Raster to_cost_image(const Raster& R) {
  Raster cost(R.height(), R.width(), R.channels());
  auto src = R.values();
  auto dst = cost.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = 1.0f - src[i];
  return cost;
}

PixelGraph::PixelGraph(Raster cost, double threshold) : cost_(std::move(cost)), threshold_(threshold) {
  if (cost_.channels() != 1) throw Error(ErrorCode::ShapeMismatch, "cost image must have one channel");
}

bool PixelGraph::traversable(int row, int col) const {
  return row >= 0 && col >= 0 && row < height() && col < width() && cost_.at(row, col) <= threshold_;
}

namespace {

// L, TL, T, TR, R as (drow, dcol).
constexpr std::array<std::pair<int, int>, 5> kSteps{{{0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

}  // namespace

std::vector<PixelGraph::Path> PixelGraph::shortest_paths(Cell source, const std::vector<Cell>& targets) const {
  std::vector<Path> paths(targets.size());
  if (!traversable(source.row, source.col)) return paths;

  const std::size_t n = static_cast<std::size_t>(height()) * width();
  const auto idx = [this](int r, int c) { return static_cast<std::size_t>(r) * width() + c; };
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> hops(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> parent(n, n);
  std::vector<bool> settled(n, false);

  std::size_t remaining = 0;
  std::vector<bool> wanted(n, false);
  for (const Cell& t : targets) {
    if (traversable(t.row, t.col) && !wanted[idx(t.row, t.col)]) {
      wanted[idx(t.row, t.col)] = true;
      ++remaining;
    }
  }

  using Entry = std::tuple<double, std::size_t, std::size_t>;  // cost, length, pixel
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t s = idx(source.row, source.col);
  best[s] = 0.0;
  hops[s] = 0;
  open.emplace(0.0, 0, s);
  while (!open.empty() && remaining > 0) {
    const auto [c, len, p] = open.top();
    open.pop();
    if (settled[p]) continue;
    settled[p] = true;
    if (wanted[p]) --remaining;
    const int r = static_cast<int>(p / static_cast<std::size_t>(width()));
    const int col = static_cast<int>(p % static_cast<std::size_t>(width()));
    for (const auto& [dr, dc] : kSteps) {
      const int nr = r + dr;
      const int nc = col + dc;
      if (!traversable(nr, nc)) continue;
      const std::size_t q = idx(nr, nc);
      if (settled[q]) continue;
      const double nc_cost = c + cost_.at(nr, nc);
      const std::size_t nlen = len + 1;
      if (std::tie(nc_cost, nlen, p) < std::tie(best[q], hops[q], parent[q])) {
        best[q] = nc_cost;
        hops[q] = nlen;
        parent[q] = p;
        open.emplace(nc_cost, nlen, q);
      }
    }
  }

  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (!traversable(targets[t].row, targets[t].col)) continue;
    const std::size_t q = idx(targets[t].row, targets[t].col);
    if (!settled[q]) continue;
    Path& path = paths[t];
    path.cost = best[q];
    for (std::size_t cur = q;; cur = parent[cur]) {
      path.pixels.push_back({static_cast<int>(cur / static_cast<std::size_t>(width())),
                             static_cast<int>(cur % static_cast<std::size_t>(width()))});
      if (cur == s) break;
    }
    std::reverse(path.pixels.begin(), path.pixels.end());
  }
  return paths;
}

namespace {

Cell pixel_of(Point p, int height, int width) {
  return {std::clamp(static_cast<int>(std::floor(p.y)), 0, height - 1),
          std::clamp(static_cast<int>(std::floor(p.x)), 0, width - 1)};
}

// Path pixels -> row-monotone polyline between the two keypoints, with one
// vertex per pixel row (mean column) strictly between them.
AnchorLine path_to_anchor_line(const std::vector<Cell>& pixels, Point from, Point to, int step) {
  std::vector<Point> pl{from};
  std::size_t i = 0;
  while (i < pixels.size()) {
    const int row = pixels[i].row;
    double sum = 0.0;
    std::size_t count = 0;
    for (; i < pixels.size() && pixels[i].row == row; ++i, ++count) sum += pixels[i].col + 0.5;
    const double y = row + 0.5;
    if (y < from.y && y > to.y) pl.push_back({sum / static_cast<double>(count), y});
  }
  pl.push_back(to);

  AnchorLine line;
  line.step = step;
  line.rows = anchor_rows(from.y, to.y, step);
  for (double row : line.rows) line.xs.push_back(*interp_x_at_row(pl, row));
  return line;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }
};

}  // namespace

BaselineResult baseline_predict(const Raster& R, const std::vector<Point>& keypoints, double dt, int anchor_step) {
  if (!(dt > 0.0 && dt <= 1.0)) throw Error(ErrorCode::InvalidArgument, "distance threshold must lie in (0, 1]");
  if (anchor_step <= 0) throw Error(ErrorCode::InvalidArgument, "anchor step must be positive");
  // A pixel is usable when it lies within (1 - dt) * T of a line, i.e. R >= dt.
  const PixelGraph graph(to_cost_image(R), 1.0 - dt);

  std::vector<Cell> pixels;
  for (const Point& k : keypoints) pixels.push_back(pixel_of(k, R.height(), R.width()));

  BaselineResult result;
  for (std::size_t i = 0; i < keypoints.size(); ++i) {
    std::vector<Cell> targets;
    std::vector<std::size_t> target_ids;
    for (std::size_t j = 0; j < keypoints.size(); ++j) {
      if (keypoints[i].y > keypoints[j].y) {
        targets.push_back(pixels[j]);
        target_ids.push_back(j);
      }
    }
    if (targets.empty()) continue;
    const auto paths = graph.shortest_paths(pixels[i], targets);
    for (std::size_t t = 0; t < paths.size(); ++t) {
      if (paths[t].pixels.empty()) continue;
      const std::size_t j = target_ids[t];
      result.candidates.push_back({static_cast<int>(i), static_cast<int>(j), paths[t].cost,
                                   paths[t].pixels.size(),
                                   path_to_anchor_line(paths[t].pixels, keypoints[i], keypoints[j], anchor_step)});
      result.candidates.back().line.from_kp = static_cast<int>(i);
      result.candidates.back().line.to_kp = static_cast<int>(j);
    }
  }

  // Kruskal on the undirected view; direction is already fixed by row order.
  std::vector<std::size_t> order(result.candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = result.candidates[a];
    const auto& y = result.candidates[b];
    return std::tie(x.cost, x.length, x.from, x.to) < std::tie(y.cost, y.length, y.from, y.to);
  });
  DisjointSets sets(keypoints.size());
  for (std::size_t k : order) {
    const auto& c = result.candidates[k];
    if (sets.unite(c.from, c.to)) result.connections.push_back(c);
  }
  return result;
}

LaneGraph baseline_graph(const BaselineResult& result, const std::vector<Point>& keypoints, const GridSpec& grid) {
  LaneGraph g;
  g.grid = grid;
  for (std::size_t i = 0; i < keypoints.size(); ++i) g.nodes.push_back({static_cast<int>(i), keypoints[i], NodeKind::start});
  for (const auto& c : result.connections) {
    LaneEdge e{c.from, c.to, {}};
    for (std::size_t k = 0; k < c.line.rows.size(); ++k) e.polyline.push_back({c.line.xs[k], c.line.rows[k]});
    e.polyline.front() = keypoints[static_cast<std::size_t>(c.from)];
    e.polyline.back() = keypoints[static_cast<std::size_t>(c.to)];
    g.edges.push_back(std::move(e));
  }
  recompute_kinds(g);
  return g;
}

}  // namespace rtk
