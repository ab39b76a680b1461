#include "rtk/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtk/error.hpp"

namespace rtk {

std::vector<DecodedKeypoint> decode_keypoints(const KeypointGrid& grid, double conf_threshold, int n_max) {
  const Raster& t = grid.tensor;
  const double cell = grid.cell_px;
  std::vector<DecodedKeypoint> kps;
  for (int r = 0; r < t.height(); ++r) {
    for (int c = 0; c < t.width(); ++c) {
      const float conf = t.at(r, c, 0);
      if (!(conf >= conf_threshold)) continue;
      const double dx = std::clamp(static_cast<double>(t.at(r, c, 1)), 0.0, 1.0);
      const double dy = std::clamp(static_cast<double>(t.at(r, c, 2)), 0.0, 1.0);
      kps.push_back({{r, c}, {c * cell + dx * cell, r * cell + dy * cell}, conf});
    }
  }
  std::stable_sort(kps.begin(), kps.end(),
                   [](const DecodedKeypoint& a, const DecodedKeypoint& b) { return a.confidence > b.confidence; });
  if (static_cast<int>(kps.size()) > n_max) kps.resize(static_cast<std::size_t>(std::max(0, n_max)));
  return kps;
}

DecodeResult decode_graph(const std::vector<DecodedKeypoint>& kps, const DenseAffinity& aff,
                          double conf_threshold, const GridSpec& grid, const EncoderConfig& cfg) {
  DecodeResult out;
  out.graph.grid = grid;
  const int n = static_cast<int>(aff.kp_index.size());
  if (n > aff.conf.height()) throw Error(ErrorCode::InconsistentIndex, "kp_index longer than the affinity");

  for (int i = 0; i < n; ++i) {
    const Cell c = aff.kp_index[static_cast<std::size_t>(i)];
    auto it = std::find_if(kps.begin(), kps.end(), [c](const DecodedKeypoint& k) { return k.cell == c; });
    if (it == kps.end()) {
      throw Error(ErrorCode::InconsistentIndex, "affinity index " + std::to_string(i) + " names cell (" +
                                                    std::to_string(c.row) + ", " + std::to_string(c.col) +
                                                    ") without a keypoint");
    }
    out.graph.nodes.push_back({i, it->position, NodeKind::start});
  }

  const double width = grid.width;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !(aff.conf.at(i, j) >= conf_threshold)) continue;
      const Point from = out.graph.nodes[static_cast<std::size_t>(i)].position;
      const Point to = out.graph.nodes[static_cast<std::size_t>(j)].position;
      if (!(from.y > to.y)) {
        out.diagnostics.push_back({DiagnosticKind::NonMonotonePolyline, i, -1,
                                   "connection " + std::to_string(i) + "->" + std::to_string(j) +
                                       " does not travel upward; dropped"});
        continue;
      }
      const auto rows = anchor_rows(from.y, to.y, cfg.anchor_step_px);
      const int interior = static_cast<int>(rows.size()) - 2;
      if (interior > aff.n_rmax) {
        out.diagnostics.push_back({DiagnosticKind::ShortPolyline, i, -1,
                                   "connection " + std::to_string(i) + "->" + std::to_string(j) +
                                       " needs more anchors than stored; dropped"});
        continue;
      }
      LaneEdge e{i, j, {from}};
      for (int k = 1; k <= interior; ++k) {
        e.polyline.push_back({aff.lines.at(i, j, k) * width, rows[static_cast<std::size_t>(k)]});
      }
      e.polyline.push_back(to);
      out.graph.edges.push_back(std::move(e));
    }
  }
  recompute_kinds(out.graph);
  return out;
}

}  // namespace rtk
