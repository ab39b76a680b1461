#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rtk/encoders.hpp"
#include "rtk/lane_graph.hpp"
#include "rtk/raster.hpp"

namespace rtk {

/// Mean absolute difference over all elements. Throws ShapeMismatch.
double mae(const Raster& a, const Raster& b);

/// Mean SSIM of one channel with an 11x11 Gaussian window (sigma 1.5),
/// C1 = 0.01^2 and C2 = 0.03^2, over fully covered window positions. Images
/// smaller than the window are scored with a single uniform window.
double ssim(const Raster& a, const Raster& b, int channel = 0);

/// Channel-averaged SSIM for multi-channel fields.
double ssim_mean(const Raster& a, const Raster& b);

/// Micro-averaged detection counts. Empty denominators yield a rate of 1 so
/// that P and R stay exchange-symmetric.
struct RateCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;

  RateCounts& operator+=(const RateCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

inline constexpr double kDefaultMatchTolerancePx = 8.0;

struct KeypointMatching {
  std::vector<std::pair<int, int>> pairs;  // (pred index, gt index)
  std::vector<int> pred_to_gt;             // -1 when unmatched
  std::vector<int> gt_to_pred;
  RateCounts counts;
};

/// One-to-one matching among pairs within tol_px. Pairs are taken greedily in
/// ascending distance (ties: pred index, then gt index) and the result is then
/// grown along augmenting paths to maximum cardinality.
KeypointMatching match_keypoints(const std::vector<Point>& pred, const std::vector<Point>& gt, double tol_px);

std::vector<Point> node_positions(const LaneGraph& graph);

struct ConnectivityMetrics {
  RateCounts counts;
  double offset_sum_cm = 0.0;  // sum over true-positive edges of their mean offset
  std::int64_t offset_edges = 0;

  double avg_offset_cm() const { return offset_edges > 0 ? offset_sum_cm / static_cast<double>(offset_edges) : 0.0; }
};

/// A predicted edge is a true positive when both endpoints are matched and the
/// ground truth has the corresponding directed edge. Offsets compare x at the
/// ground-truth anchor rows.
ConnectivityMetrics eval_connectivity(const LaneGraph& pred, const LaneGraph& gt, const KeypointMatching& matching,
                                      int anchor_step = 4);

struct LossWeights {
  double lambda_1 = 1.0;
  double lambda_2 = 1.0;
  double lambda_conf = 1.0;
  double lambda_coord = 5.0;

  void validate() const;
};

/// Cosine-plus-L1 loss of one field: mean(1 - cos) over pixels where the
/// ground truth is nonzero plus the mean absolute error over all elements.
double field_loss(const Raster& pred, const Raster& gt);

double loss_stage1(const FieldSet& pred, const FieldSet& gt, const LossWeights& w);
double loss_stage2(const KeypointGrid& pred, const KeypointGrid& gt, const LossWeights& w);
/// Both affinities are read through the alignment: pred.kp_index must equal
/// alignment.pred_cells and gt.kp_index alignment.gt_cells.
double loss_stage3(const DenseAffinity& pred, const DenseAffinity& gt, const AffinityAlignment& alignment,
                   const LossWeights& w);

enum class ComplexityBucket : std::uint8_t { easy, medium, difficult };

std::string_view to_string(ComplexityBucket b);
ComplexityBucket complexity_bucket(int keypoints);
ComplexityBucket complexity_bucket(const LaneGraph& gt_graph);

struct FieldMetrics {
  double mae = 0.0;
  double ssim = 0.0;
};

/// Scores of one frame, or of many frames after aggregation.
struct EvalReport {
  std::optional<std::array<FieldMetrics, 3>> fields;  // R, D, P
  RateCounts keypoints;
  ConnectivityMetrics connectivity;
  std::int64_t frames = 0;
};

struct EvalOptions {
  double tol_px = kDefaultMatchTolerancePx;
  int anchor_step = 4;
};

EvalReport evaluate_frame(const LaneGraph& pred, const LaneGraph& gt, const EvalOptions& options,
                          const FieldSet* pred_fields = nullptr, const FieldSet* gt_fields = nullptr);

/// Sums counts and offsets (micro average); field metrics are frame means.
class EvalAggregate {
 public:
  void add(const EvalReport& frame);
  EvalReport total() const;

 private:
  EvalReport sum_;
  std::array<FieldMetrics, 3> field_sum_{};
  std::int64_t field_frames_ = 0;
};

}  // namespace rtk
