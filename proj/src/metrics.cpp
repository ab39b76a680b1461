#include "rtk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <tuple>

#include "rtk/error.hpp"

namespace rtk {

double mae(const Raster& a, const Raster& b) {
  require_same_shape(a, b, "mae operands differ in shape");
  if (a.empty()) return 0.0;
  auto va = a.values();
  auto vb = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) sum += std::fabs(static_cast<double>(va[i]) - vb[i]);
  return sum / static_cast<double>(va.size());
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_kernel() {
  std::array<double, kWindow> k{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double x = i - kWindow / 2;
    k[static_cast<std::size_t>(i)] = std::exp(-(x * x) / (2.0 * kSigma * kSigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

double ssim_index(double mu_a, double mu_b, double var_a, double var_b, double cov) {
  return ((2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2)) /
         ((mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2));
}

// Valid-mode separable filtering of a row-major h x w plane.
std::vector<double> filter_valid(const std::vector<double>& img, int h, int w) {
  static const auto k = gaussian_kernel();
  const int oh = h - kWindow + 1;
  const int ow = w - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow, 0.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int t = 0; t < kWindow; ++t) s += k[static_cast<std::size_t>(t)] * img[static_cast<std::size_t>(r) * w + c + t];
      tmp[static_cast<std::size_t>(r) * ow + c] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s = 0.0;
      for (int t = 0; t < kWindow; ++t) s += k[static_cast<std::size_t>(t)] * tmp[static_cast<std::size_t>(r + t) * ow + c];
      out[static_cast<std::size_t>(r) * ow + c] = s;
    }
  }
  return out;
}

}  // namespace

double ssim(const Raster& a, const Raster& b, int channel) {
  require_same_shape(a, b, "ssim operands differ in shape");
  if (channel < 0 || channel >= a.channels()) throw Error(ErrorCode::OutOfRange, "ssim channel out of range");
  const int h = a.height();
  const int w = a.width();
  if (h == 0 || w == 0) return 1.0;

  std::vector<double> x(static_cast<std::size_t>(h) * w), y(x.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      x[static_cast<std::size_t>(r) * w + c] = a.at(r, c, channel);
      y[static_cast<std::size_t>(r) * w + c] = b.at(r, c, channel);
    }
  }

  if (h < kWindow || w < kWindow) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double vx = 0.0, vy = 0.0, cxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      vx += (x[i] - mx) * (x[i] - mx);
      vy += (y[i] - my) * (y[i] - my);
      cxy += (x[i] - mx) * (y[i] - my);
    }
    return ssim_index(mx, my, vx / n, vy / n, cxy / n);
  }

  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mu_x = filter_valid(x, h, w);
  const auto mu_y = filter_valid(y, h, w);
  const auto e_xx = filter_valid(xx, h, w);
  const auto e_yy = filter_valid(yy, h, w);
  const auto e_xy = filter_valid(xy, h, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double var_x = e_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = e_yy[i] - mu_y[i] * mu_y[i];
    const double cov = e_xy[i] - mu_x[i] * mu_y[i];
    sum += ssim_index(mu_x[i], mu_y[i], var_x, var_y, cov);
  }
  return sum / static_cast<double>(mu_x.size());
}

double ssim_mean(const Raster& a, const Raster& b) {
  require_same_shape(a, b, "ssim operands differ in shape");
  double sum = 0.0;
  for (int ch = 0; ch < a.channels(); ++ch) sum += ssim(a, b, ch);
  return sum / a.channels();
}

double RateCounts::precision() const {
  return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double RateCounts::recall() const {
  return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double RateCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

KeypointMatching match_keypoints(const std::vector<Point>& pred, const std::vector<Point>& gt, double tol_px) {
  if (!(tol_px > 0.0)) throw Error(ErrorCode::InvalidArgument, "match tolerance must be positive");
  KeypointMatching m;
  m.pred_to_gt.assign(pred.size(), -1);
  m.gt_to_pred.assign(gt.size(), -1);

  std::vector<std::tuple<double, int, int>> candidates;
  std::vector<std::vector<int>> neighbours(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) {
      const double d = distance(pred[i], gt[j]);
      if (d <= tol_px) candidates.emplace_back(d, static_cast<int>(i), static_cast<int>(j));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& [d, i, j] : candidates) {
    neighbours[static_cast<std::size_t>(i)].push_back(j);  // ascending distance per pred
    if (m.pred_to_gt[static_cast<std::size_t>(i)] < 0 && m.gt_to_pred[static_cast<std::size_t>(j)] < 0) {
      m.pred_to_gt[static_cast<std::size_t>(i)] = j;
      m.gt_to_pred[static_cast<std::size_t>(j)] = i;
    }
  }

  // Augmenting paths lift the greedy result to maximum cardinality.
  std::vector<bool> visited(gt.size());
  std::function<bool(int)> augment = [&](int i) {
    for (int j : neighbours[static_cast<std::size_t>(i)]) {
      if (visited[static_cast<std::size_t>(j)]) continue;
      visited[static_cast<std::size_t>(j)] = true;
      const int owner = m.gt_to_pred[static_cast<std::size_t>(j)];
      if (owner < 0 || augment(owner)) {
        m.pred_to_gt[static_cast<std::size_t>(i)] = j;
        m.gt_to_pred[static_cast<std::size_t>(j)] = i;
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (m.pred_to_gt[i] >= 0) continue;
    std::fill(visited.begin(), visited.end(), false);
    augment(static_cast<int>(i));
  }

  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (m.pred_to_gt[i] >= 0) m.pairs.emplace_back(static_cast<int>(i), m.pred_to_gt[i]);
  }
  m.counts.tp = static_cast<std::int64_t>(m.pairs.size());
  m.counts.fp = static_cast<std::int64_t>(pred.size()) - m.counts.tp;
  m.counts.fn = static_cast<std::int64_t>(gt.size()) - m.counts.tp;
  return m;
}

std::vector<Point> node_positions(const LaneGraph& graph) {
  std::vector<Point> pts;
  pts.reserve(graph.nodes.size());
  for (const auto& n : graph.nodes) pts.push_back(n.position);
  return pts;
}

ConnectivityMetrics eval_connectivity(const LaneGraph& pred, const LaneGraph& gt, const KeypointMatching& matching,
                                      int anchor_step) {
  if (matching.pred_to_gt.size() != pred.nodes.size() || matching.gt_to_pred.size() != gt.nodes.size()) {
    throw Error(ErrorCode::InconsistentIndex, "matching does not belong to these graphs");
  }
  ConnectivityMetrics out;
  const double cm_per_px = gt.grid.resolution * 100.0;
  for (const auto& e : pred.edges) {
    const int pu = pred.node_index(e.from);
    const int pv = pred.node_index(e.to);
    const int gu = pu < 0 ? -1 : matching.pred_to_gt[static_cast<std::size_t>(pu)];
    const int gv = pv < 0 ? -1 : matching.pred_to_gt[static_cast<std::size_t>(pv)];
    const LaneEdge* match = nullptr;
    if (gu >= 0 && gv >= 0) {
      const int gid_u = gt.nodes[static_cast<std::size_t>(gu)].id;
      const int gid_v = gt.nodes[static_cast<std::size_t>(gv)].id;
      for (const auto& ge : gt.edges) {
        if (ge.from == gid_u && ge.to == gid_v) match = &ge;
      }
    }
    if (match == nullptr) {
      ++out.counts.fp;
      continue;
    }
    ++out.counts.tp;

    double sum = 0.0;
    int rows = 0;
    for (double row : anchor_rows(match->polyline.front().y, match->polyline.back().y, anchor_step)) {
      const auto xg = interp_x_at_row(match->polyline, row);
      const auto xp = interp_x_at_row(e.polyline, row);
      if (!xg || !xp) continue;
      sum += std::fabs(*xp - *xg);
      ++rows;
    }
    if (rows > 0) {
      out.offset_sum_cm += sum / rows * cm_per_px;
      ++out.offset_edges;
    }
  }
  out.counts.fn = static_cast<std::int64_t>(gt.edges.size()) - out.counts.tp;
  return out;
}

void LossWeights::validate() const {
  if (!(lambda_1 > 0 && lambda_2 > 0 && lambda_conf > 0 && lambda_coord > 0)) {
    throw Error(ErrorCode::InvalidArgument, "loss weights must be positive");
  }
}

double field_loss(const Raster& pred, const Raster& gt) {
  require_same_shape(pred, gt, "field shapes differ");
  double cos_sum = 0.0;
  std::int64_t support = 0;
  for (int r = 0; r < gt.height(); ++r) {
    for (int c = 0; c < gt.width(); ++c) {
      const auto g = gt.pixel(r, c);
      const auto p = pred.pixel(r, c);
      double gg = 0.0, pp = 0.0, pg = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        gg += static_cast<double>(g[k]) * g[k];
        pp += static_cast<double>(p[k]) * p[k];
        pg += static_cast<double>(p[k]) * g[k];
      }
      if (gg == 0.0) continue;
      ++support;
      const double cosine = pp == 0.0 ? 0.0 : pg / (std::sqrt(pp) * std::sqrt(gg));
      cos_sum += 1.0 - cosine;
    }
  }
  const double cos_term = support > 0 ? cos_sum / static_cast<double>(support) : 0.0;
  return cos_term + mae(pred, gt);
}

double loss_stage1(const FieldSet& pred, const FieldSet& gt, const LossWeights& w) {
  w.validate();
  return field_loss(pred.R, gt.R) + w.lambda_1 * field_loss(pred.D, gt.D) + w.lambda_2 * field_loss(pred.P, gt.P);
}

namespace {

constexpr double kProbClamp = 1e-7;

double bce(double target, double predicted) {
  const double p = std::clamp(predicted, kProbClamp, 1.0 - kProbClamp);
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

}  // namespace

double loss_stage2(const KeypointGrid& pred, const KeypointGrid& gt, const LossWeights& w) {
  w.validate();
  require_same_shape(pred.tensor, gt.tensor, "keypoint grids differ in shape");
  const Raster& p = pred.tensor;
  const Raster& g = gt.tensor;
  double conf = 0.0;
  double coord = 0.0;
  std::int64_t occupied = 0;
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      conf += bce(g.at(r, c, 0), p.at(r, c, 0));
      if (g.at(r, c, 0) > 0.0f) {
        ++occupied;
        const double ex = static_cast<double>(p.at(r, c, 1)) - g.at(r, c, 1);
        const double ey = static_cast<double>(p.at(r, c, 2)) - g.at(r, c, 2);
        coord += ex * ex + ey * ey;
      }
    }
  }
  const double cells = static_cast<double>(g.height()) * g.width();
  const double conf_term = cells > 0 ? conf / cells : 0.0;
  const double coord_term = occupied > 0 ? coord / static_cast<double>(occupied) : 0.0;
  return w.lambda_conf * conf_term + w.lambda_coord * coord_term;
}

double loss_stage3(const DenseAffinity& pred, const DenseAffinity& gt, const AffinityAlignment& alignment,
                   const LossWeights& w) {
  w.validate();
  if (pred.kp_index != alignment.pred_cells || gt.kp_index != alignment.gt_cells ||
      alignment.pred_to_gt.size() != alignment.pred_cells.size() ||
      static_cast<int>(pred.kp_index.size()) > pred.conf.height() ||
      static_cast<int>(gt.kp_index.size()) > gt.conf.height()) {
    throw Error(ErrorCode::InconsistentIndex, "affinities are not expressed in the alignment's frame");
  }
  if (pred.n_rmax != gt.n_rmax) throw Error(ErrorCode::ShapeMismatch, "affinities use different n_rmax");

  const int n = static_cast<int>(alignment.pred_cells.size());
  double conf = 0.0;
  double coord = 0.0;
  std::int64_t anchors = 0;
  for (int i = 0; i < n; ++i) {
    const int gi = alignment.pred_to_gt[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const int gj = alignment.pred_to_gt[static_cast<std::size_t>(j)];
      const double target = (gi >= 0 && gj >= 0) ? gt.conf.at(gi, gj) : 0.0;
      conf += bce(target, pred.conf.at(i, j));
      if (target <= 0.0) continue;
      const int count = static_cast<int>(std::lround(gt.lines.at(gi, gj, 0) * (gt.n_rmax + 2)));
      for (int k = 1; k <= count - 2 && k <= gt.n_rmax; ++k) {
        const double e = static_cast<double>(pred.lines.at(i, j, k)) - gt.lines.at(gi, gj, k);
        coord += e * e;
        ++anchors;
      }
    }
  }
  const double conf_term = n > 0 ? conf / (static_cast<double>(n) * n) : 0.0;
  const double coord_term = anchors > 0 ? coord / static_cast<double>(anchors) : 0.0;
  return w.lambda_conf * conf_term + w.lambda_coord * coord_term;
}

std::string_view to_string(ComplexityBucket b) {
  switch (b) {
    case ComplexityBucket::easy: return "easy";
    case ComplexityBucket::medium: return "medium";
    case ComplexityBucket::difficult: return "difficult";
  }
  return "easy";
}

ComplexityBucket complexity_bucket(int keypoints) {
  if (keypoints >= 1 && keypoints <= 5) return ComplexityBucket::easy;
  if (keypoints >= 6 && keypoints <= 10) return ComplexityBucket::medium;
  if (keypoints >= 11 && keypoints <= 15) return ComplexityBucket::difficult;
  throw Error(ErrorCode::OutOfRange, std::to_string(keypoints) + " keypoints is outside the 1..15 buckets");
}

ComplexityBucket complexity_bucket(const LaneGraph& gt_graph) {
  return complexity_bucket(static_cast<int>(gt_graph.nodes.size()));
}

EvalReport evaluate_frame(const LaneGraph& pred, const LaneGraph& gt, const EvalOptions& options,
                          const FieldSet* pred_fields, const FieldSet* gt_fields) {
  EvalReport report;
  report.frames = 1;
  const auto matching = match_keypoints(node_positions(pred), node_positions(gt), options.tol_px);
  report.keypoints = matching.counts;
  report.connectivity = eval_connectivity(pred, gt, matching, options.anchor_step);
  if (pred_fields != nullptr && gt_fields != nullptr) {
    report.fields = std::array<FieldMetrics, 3>{
        FieldMetrics{mae(pred_fields->R, gt_fields->R), ssim(pred_fields->R, gt_fields->R)},
        FieldMetrics{mae(pred_fields->D, gt_fields->D), ssim_mean(pred_fields->D, gt_fields->D)},
        FieldMetrics{mae(pred_fields->P, gt_fields->P), ssim_mean(pred_fields->P, gt_fields->P)}};
  }
  return report;
}

void EvalAggregate::add(const EvalReport& frame) {
  sum_.frames += frame.frames;
  sum_.keypoints += frame.keypoints;
  sum_.connectivity.counts += frame.connectivity.counts;
  sum_.connectivity.offset_sum_cm += frame.connectivity.offset_sum_cm;
  sum_.connectivity.offset_edges += frame.connectivity.offset_edges;
  if (frame.fields) {
    for (std::size_t k = 0; k < 3; ++k) {
      field_sum_[k].mae += (*frame.fields)[k].mae;
      field_sum_[k].ssim += (*frame.fields)[k].ssim;
    }
    ++field_frames_;
  }
}

EvalReport EvalAggregate::total() const {
  EvalReport out = sum_;
  if (field_frames_ > 0) {
    std::array<FieldMetrics, 3> mean{};
    for (std::size_t k = 0; k < 3; ++k) {
      mean[k].mae = field_sum_[k].mae / static_cast<double>(field_frames_);
      mean[k].ssim = field_sum_[k].ssim / static_cast<double>(field_frames_);
    }
    out.fields = mean;
  }
  return out;
}

}  // namespace rtk
