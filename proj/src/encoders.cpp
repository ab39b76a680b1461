#include "rtk/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rtk/distance_map.hpp"
#include "rtk/error.hpp"

namespace rtk {

void EncoderConfig::validate() const {
  if (!(truncation_px > 0.0) || anchor_step_px <= 0 || n_max <= 0 || n_rmax <= 0) {
    throw Error(ErrorCode::InvalidArgument, "encoder parameters must be positive");
  }
}

std::array<float, 3> hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  const double h6 = h * 6.0;
  const int sector = static_cast<int>(std::floor(h6)) % 6;
  const double f = h6 - std::floor(h6);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  double r = v, g = t, b = p;
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  return {static_cast<float>(r), static_cast<float>(g), static_cast<float>(b)};
}

double rgb_to_hue(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  if (delta <= 0.0) return 0.0;
  double h = 0.0;
  if (mx == r) {
    h = std::fmod((g - b) / delta, 6.0);
  } else if (mx == g) {
    h = (b - r) / delta + 2.0;
  } else {
    h = (r - g) / delta + 4.0;
  }
  h /= 6.0;
  return h < 0.0 ? h + 1.0 : h;
}

FieldSet encode_fields(const LaneGraph& graph, const EncoderConfig& cfg) {
  cfg.validate();
  const GridSpec& g = graph.grid;
  const DistanceMap dist = compute_distance_map(graph, cfg.truncation_px);
  FieldSet f{Raster(g.height, g.width, 1), Raster(g.height, g.width, 3), Raster(g.height, g.width, 3),
             cfg.truncation_px};
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const double d = dist.at(r, c);
      if (!(d < cfg.truncation_px)) continue;
      const float value = static_cast<float>(1.0 - d / cfg.truncation_px);
      if (!(value > 0.0f)) continue;
      f.R.at(r, c) = value;
      const double theta = dist.tangent_at(r, c);
      const auto dir = hsv_to_rgb(theta / kTwoPi, 1.0, 1.0);
      const auto perp = hsv_to_rgb(normalize_angle(theta + std::numbers::pi / 2.0) / kTwoPi, 1.0, 1.0);
      for (int ch = 0; ch < 3; ++ch) {
        f.D.at(r, c, ch) = dir[static_cast<std::size_t>(ch)];
        f.P.at(r, c, ch) = perp[static_cast<std::size_t>(ch)];
      }
    }
  }
  return f;
}

Raster encode_distance_field(const LaneGraph& graph, const EncoderConfig& cfg) {
  return encode_fields(graph, cfg).R;
}

Raster encode_direction_field(const LaneGraph& graph, const EncoderConfig& cfg) {
  return encode_fields(graph, cfg).D;
}

Raster encode_perp_field(const LaneGraph& graph, const EncoderConfig& cfg) {
  return encode_fields(graph, cfg).P;
}

Cell cell_of(Point p, int cell_px) {
  return {static_cast<int>(std::floor(p.y / cell_px)), static_cast<int>(std::floor(p.x / cell_px))};
}

KeypointGrid encode_keypoint_grid(const LaneGraph& graph, const EncoderConfig& cfg) {
  cfg.validate();
  const GridSpec& g = graph.grid;
  const int cell = g.keypoint_cell;
  KeypointGrid kp{Raster(g.cell_rows(), g.cell_cols(), 3), cell};
  for (const auto& n : graph.nodes) {
    if (!g.contains(n.position)) {
      throw Error(ErrorCode::OutOfRange, "node " + std::to_string(n.id) + " lies outside the grid");
    }
    const Cell c = cell_of(n.position, cell);
    if (kp.tensor.at(c.row, c.col, 0) != 0.0f) {
      throw Error(ErrorCode::CellCollision, "two keypoints share cell (" + std::to_string(c.row) + ", " +
                                                std::to_string(c.col) + ")");
    }
    kp.tensor.at(c.row, c.col, 0) = 1.0f;
    kp.tensor.at(c.row, c.col, 1) = static_cast<float>(std::fmod(n.position.x, cell) / cell);
    kp.tensor.at(c.row, c.col, 2) = static_cast<float>(std::fmod(n.position.y, cell) / cell);
  }
  return kp;
}

std::vector<double> anchor_rows(double from_y, double to_y, int step) {
  std::vector<double> rows;
  for (int k = 0;; ++k) {
    const double row = from_y - static_cast<double>(k) * step;
    if (!(row > to_y)) break;
    rows.push_back(row);
  }
  rows.push_back(to_y);
  return rows;
}

AnchorLine resample_reference_line(const LaneEdge& edge, const EncoderConfig& cfg) {
  if (edge.polyline.size() < 2 || !strictly_row_decreasing(edge.polyline)) {
    throw Error(ErrorCode::InvalidArgument, "reference line must be strictly row-monotone");
  }
  AnchorLine line;
  line.from_kp = edge.from;
  line.to_kp = edge.to;
  line.step = cfg.anchor_step_px;
  line.rows = anchor_rows(edge.polyline.front().y, edge.polyline.back().y, cfg.anchor_step_px);
  if (static_cast<int>(line.rows.size()) > cfg.max_anchors()) {
    throw Error(ErrorCode::AnchorOverflow, std::to_string(line.rows.size()) + " anchors exceed the limit of " +
                                               std::to_string(cfg.max_anchors()));
  }
  line.xs.reserve(line.rows.size());
  for (double row : line.rows) line.xs.push_back(*interp_x_at_row(edge.polyline, row));
  return line;
}

DenseAffinity::DenseAffinity(const EncoderConfig& cfg)
    : conf(cfg.n_max, cfg.n_max, 1), lines(cfg.n_max, cfg.n_max, cfg.n_rmax + 1), n_max(cfg.n_max),
      n_rmax(cfg.n_rmax) {}

DenseAffinity encode_affinity(const LaneGraph& graph, const KeypointGrid& kp_grid, const EncoderConfig& cfg) {
  cfg.validate();
  DenseAffinity aff(cfg);
  const Raster& t = kp_grid.tensor;
  for (int r = 0; r < t.height(); ++r) {
    for (int c = 0; c < t.width(); ++c) {
      if (t.at(r, c, 0) > 0.0f) aff.kp_index.push_back({r, c});
    }
  }
  if (static_cast<int>(aff.kp_index.size()) > cfg.n_max) {
    throw Error(ErrorCode::TooManyKeypoints, std::to_string(aff.kp_index.size()) + " keypoints exceed n_max");
  }
  if (static_cast<int>(graph.edges.size()) > cfg.n_max) {
    throw Error(ErrorCode::TooManyEdges, std::to_string(graph.edges.size()) + " connections exceed n_max");
  }

  std::map<Cell, int> dense;
  for (std::size_t i = 0; i < aff.kp_index.size(); ++i) dense[aff.kp_index[i]] = static_cast<int>(i);
  auto index_of = [&](int node_id) {
    const Cell c = cell_of(graph.node(node_id).position, kp_grid.cell_px);
    auto it = dense.find(c);
    if (it == dense.end()) {
      throw Error(ErrorCode::InconsistentIndex, "node " + std::to_string(node_id) + " has no keypoint cell");
    }
    return it->second;
  };

  const double width = graph.grid.width;
  for (const auto& e : graph.edges) {
    const int i = index_of(e.from);
    const int j = index_of(e.to);
    const AnchorLine line = resample_reference_line(e, cfg);
    aff.conf.at(i, j) = 1.0f;
    aff.lines.at(i, j, 0) = static_cast<float>(static_cast<double>(line.rows.size()) / cfg.max_anchors());
    for (std::size_t k = 1; k + 1 < line.xs.size(); ++k) {
      aff.lines.at(i, j, static_cast<int>(k)) = static_cast<float>(line.xs[k] / width);
    }
  }
  return aff;
}

std::vector<Cell> graph_cells(const LaneGraph& graph) {
  std::vector<Cell> cells;
  for (const auto& n : graph.nodes) cells.push_back(cell_of(n.position, graph.grid.keypoint_cell));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

AffinityAlignment align_affinity(const std::vector<DecodedKeypoint>& pred_kps, const LaneGraph& gt_graph,
                                 const EncoderConfig& cfg) {
  cfg.validate();
  AffinityAlignment a;
  for (const auto& kp : pred_kps) a.pred_cells.push_back(kp.cell);
  a.gt_cells = graph_cells(gt_graph);
  a.pred_to_gt.assign(a.pred_cells.size(), -1);
  a.gt_to_pred.assign(a.gt_cells.size(), -1);
  for (std::size_t i = 0; i < a.pred_cells.size(); ++i) {
    auto it = std::lower_bound(a.gt_cells.begin(), a.gt_cells.end(), a.pred_cells[i]);
    if (it != a.gt_cells.end() && *it == a.pred_cells[i]) {
      const auto g = static_cast<std::size_t>(it - a.gt_cells.begin());
      if (a.gt_to_pred[g] < 0) {
        a.pred_to_gt[i] = static_cast<int>(g);
        a.gt_to_pred[g] = static_cast<int>(i);
      }
    }
  }
  return a;
}

}  // namespace rtk
