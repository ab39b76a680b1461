#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "rtk/error.hpp"
#include "rtk/metrics.hpp"
#include "rtk/pipeline.hpp"

using namespace rtk;
using rtk::test::make_graph;
using rtk::test::Prng;

namespace {

LaneNode node(int id, double x, double y) { return {id, {x, y}, NodeKind::start}; }

Raster random_raster(Prng& rng, int h, int w, int c) {
  Raster r(h, w, c);
  for (float& v : r.values()) v = static_cast<float>(rng.uniform());
  return r;
}

// Maximum matching size by trying every assignment.
int brute_force_matching(const std::vector<Point>& pred, const std::vector<Point>& gt, double tol) {
  std::vector<bool> used(gt.size());
  std::function<int(std::size_t)> go = [&](std::size_t i) -> int {
    if (i == pred.size()) return 0;
    int best = go(i + 1);
    for (std::size_t j = 0; j < gt.size(); ++j) {
      if (used[j] || distance(pred[i], gt[j]) > tol) continue;
      used[j] = true;
      best = std::max(best, 1 + go(i + 1));
      used[j] = false;
    }
    return best;
  };
  return go(0);
}

}  // namespace

TEST_CASE("mean absolute error") {
  Raster a(4, 4), b(4, 4, 1, 1.0f);
  CHECK(mae(a, a) == 0.0);
  CHECK(mae(a, b) == 1.0);
  Raster half(4, 4);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 4; ++c) half.at(r, c) = 0.5f;
  }
  CHECK(mae(a, half) == doctest::Approx(0.25));
  CHECK_THROWS_WITH_AS(mae(a, Raster(4, 5)), doctest::Contains("ShapeMismatch"), Error);
}

TEST_CASE("ssim identities and the constant-image closed form") {
  Prng rng(7);
  const Raster x = random_raster(rng, 32, 32, 1);
  const Raster y = random_raster(rng, 32, 32, 1);
  CHECK(ssim(x, x) == doctest::Approx(1.0));
  CHECK(ssim(x, y) == doctest::Approx(ssim(y, x)));
  CHECK(ssim(x, y) < 0.5);
  CHECK(ssim(x, y) >= -1.0);

  // Constant images: variances vanish, only the luminance term remains.
  const double a = 0.4, b = 0.5, c1 = 1e-4;
  const double expected = (2 * a * b + c1) / (a * a + b * b + c1);
  CHECK(ssim(Raster(20, 20, 1, 0.4f), Raster(20, 20, 1, 0.5f)) == doctest::Approx(expected).epsilon(1e-6));
  CHECK(ssim(Raster(5, 5, 1, 0.4f), Raster(5, 5, 1, 0.5f)) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("keypoint matching examples") {
  const std::vector<Point> gt{{10, 10}, {40, 10}, {70, 10}};
  const auto same = match_keypoints(gt, gt, 8);
  CHECK(same.counts.precision() == 1.0);
  CHECK(same.counts.recall() == 1.0);

  const auto far = match_keypoints({{10, 40}, {70, 40}}, gt, 8);
  CHECK(far.counts.tp == 0);
  CHECK(far.counts.f1() == 0.0);

  const auto two = match_keypoints({{12, 10}, {41, 12}}, gt, 8);
  CHECK(two.counts.precision() == 1.0);
  CHECK(two.counts.recall() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("matching reaches the brute-force optimum on all small instances") {
  Prng rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    const int np = rng.below(6), ng = rng.below(6);
    std::vector<Point> pred, gt;
    // Points on a coarse lattice so that ties and chains are frequent.
    for (int i = 0; i < np; ++i) pred.push_back({4.0 * rng.below(6), 4.0 * rng.below(3)});
    for (int i = 0; i < ng; ++i) gt.push_back({4.0 * rng.below(6), 4.0 * rng.below(3)});
    const auto m = match_keypoints(pred, gt, 5.0);
    CHECK(m.counts.tp == brute_force_matching(pred, gt, 5.0));
    for (auto [i, j] : m.pairs) CHECK(distance(pred[static_cast<std::size_t>(i)], gt[static_cast<std::size_t>(j)]) <= 5.0);
    const auto swapped = match_keypoints(gt, pred, 5.0);
    CHECK(swapped.counts.precision() == m.counts.recall());
    CHECK(swapped.counts.recall() == m.counts.precision());
  }
}

TEST_CASE("connectivity counts and offsets") {
  const LaneGraph gt = make_graph({node(0, 64, 120), node(1, 64, 20), node(2, 30, 20)}, {{0, 1}});
  const auto match_self = match_keypoints(node_positions(gt), node_positions(gt), 8);
  const auto same = eval_connectivity(gt, gt, match_self, 4);
  CHECK(same.counts.precision() == 1.0);
  CHECK(same.counts.recall() == 1.0);
  CHECK(same.avg_offset_cm() == 0.0);

  LaneGraph extra = gt;
  extra.edges.push_back({0, 2, {{64, 120}, {30, 20}}});
  const auto fp = eval_connectivity(extra, gt, match_self, 4);
  CHECK(fp.counts.fp == 1);
  CHECK(fp.counts.tp == 1);

  LaneGraph shifted = gt;
  shifted.edges[0].polyline = {{64, 120}, {65, 116}, {65, 24}, {64, 20}};
  const auto off = eval_connectivity(shifted, gt, match_self, 4);
  // Interior anchors are off by exactly 1 px, the two endpoints by 0.
  const double anchors = 26.0;
  CHECK(off.avg_offset_cm() == doctest::Approx(26.0 * (anchors - 2) / anchors));

  LaneGraph constant = gt;
  constant.nodes[1].position = {65, 20};
  constant.nodes[0].position = {65, 120};
  constant.edges[0].polyline = {{65, 120}, {65, 20}};
  const auto m = match_keypoints(node_positions(constant), node_positions(gt), 8);
  CHECK(eval_connectivity(constant, gt, m, 4).avg_offset_cm() == doctest::Approx(26.0));
}

TEST_CASE("stage one loss") {
  const EncoderConfig cfg;
  const LaneGraph g = scene_ground_truth(SceneSpec{});
  const FieldSet gt = encode_fields(g, cfg);
  const LossWeights w;
  CHECK(loss_stage1(gt, gt, w) == doctest::Approx(0.0).epsilon(1e-9));

  FieldSet zero = gt;
  for (Raster* r : {&zero.R, &zero.D, &zero.P}) std::fill(r->values().begin(), r->values().end(), 0.0f);
  const auto mean_abs = [](const Raster& r) {
    double s = 0;
    for (float v : r.values()) s += std::abs(v);
    return s / static_cast<double>(r.size());
  };
  CHECK(field_loss(zero.R, gt.R) == doctest::Approx(1.0 + mean_abs(gt.R)));
  CHECK(field_loss(zero.D, gt.D) == doctest::Approx(1.0 + mean_abs(gt.D)));

  // Positive per-pixel scaling leaves the cosine term unchanged.
  Prng rng(3);
  FieldSet scaled = gt;
  for (int r = 0; r < 128; ++r) {
    for (int c = 0; c < 128; ++c) {
      const float s = 0.5f + static_cast<float>(rng.uniform());
      for (int ch = 0; ch < 3; ++ch) scaled.D.at(r, c, ch) *= s;
    }
  }
  CHECK(field_loss(scaled.D, gt.D) == doctest::Approx(mae(scaled.D, gt.D)).epsilon(1e-6));
}

TEST_CASE("stage two loss closed forms") {
  const EncoderConfig cfg;
  const LaneGraph g = scene_ground_truth(SceneSpec{});
  const KeypointGrid gt = encode_keypoint_grid(g, cfg);
  const LossWeights w;
  CHECK(loss_stage2(gt, gt, w) == doctest::Approx(0.0).epsilon(1e-6));

  KeypointGrid half = gt;
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) half.tensor.at(r, c, 0) = 0.5f;
  }
  CHECK(loss_stage2(half, gt, w) == doctest::Approx(std::log(2.0)));

  KeypointGrid moved = gt;
  int nk = 0, row = 0, col = 0;
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      if (gt.confidence(r, c) > 0) {
        ++nk;
        row = r;
        col = c;
      }
    }
  }
  moved.tensor.at(row, col, 1) += 0.5f;
  const double bce_exact = -std::log(1.0 - 1e-7);  // clamped ideal prediction
  CHECK(loss_stage2(moved, gt, w) == doctest::Approx(bce_exact + w.lambda_coord * 0.25 / nk).epsilon(1e-6));
}

TEST_CASE("stage three loss closed forms") {
  const EncoderConfig cfg;
  SceneSpec spec;
  spec.layout = SceneTemplate::fork;
  const LaneGraph g = scene_ground_truth(spec);
  const KeypointGrid kg = encode_keypoint_grid(g, cfg);
  const DenseAffinity gt = encode_affinity(g, kg, cfg);
  const auto kps = decode_keypoints(kg, 0.5, cfg.n_max);
  const AffinityAlignment al = align_affinity(kps, g, cfg);
  const LossWeights w;
  CHECK(loss_stage3(gt, gt, al, w) == doctest::Approx(0.0).epsilon(1e-6));

  DenseAffinity half = gt;
  std::fill(half.conf.values().begin(), half.conf.values().end(), 0.5f);
  CHECK(loss_stage3(half, gt, al, w) == doctest::Approx(std::log(2.0)));

  // Single connection, every stored x off by 0.1.
  const LaneGraph single = scene_ground_truth(SceneSpec{});
  const KeypointGrid sk = encode_keypoint_grid(single, cfg);
  const DenseAffinity sg = encode_affinity(single, sk, cfg);
  const AffinityAlignment sal = align_affinity(decode_keypoints(sk, 0.5, cfg.n_max), single, cfg);
  DenseAffinity shifted = sg;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (sg.conf.at(i, j) == 0.0f) continue;
      const int count = static_cast<int>(std::lround(sg.lines.at(i, j, 0) * (cfg.n_rmax + 2)));
      for (int k = 1; k <= count - 2; ++k) shifted.lines.at(i, j, k) += 0.1f;
    }
  }
  const double bce_exact = -std::log(1.0 - 1e-7);
  CHECK(loss_stage3(shifted, sg, sal, w) == doctest::Approx(bce_exact + w.lambda_coord * 0.01).epsilon(1e-5));

  DenseAffinity wrong = sg;
  wrong.kp_index[0] = {0, 0};
  CHECK_THROWS_WITH_AS(loss_stage3(wrong, sg, sal, w), doctest::Contains("InconsistentIndex"), Error);
}

TEST_CASE("complexity buckets") {
  CHECK(complexity_bucket(3) == ComplexityBucket::easy);
  CHECK(complexity_bucket(5) == ComplexityBucket::easy);
  CHECK(complexity_bucket(6) == ComplexityBucket::medium);
  CHECK(complexity_bucket(10) == ComplexityBucket::medium);
  CHECK(complexity_bucket(11) == ComplexityBucket::difficult);
  CHECK(complexity_bucket(15) == ComplexityBucket::difficult);
  CHECK_THROWS_WITH_AS(complexity_bucket(0), doctest::Contains("OutOfRange"), Error);
  CHECK_THROWS_WITH_AS(complexity_bucket(16), doctest::Contains("OutOfRange"), Error);
}

TEST_CASE("aggregation sums counts across frames") {
  EvalReport a, b;
  a.frames = b.frames = 1;
  a.keypoints = {3, 1, 0};
  b.keypoints = {1, 0, 3};
  EvalAggregate agg;
  agg.add(a);
  agg.add(b);
  const EvalReport t = agg.total();
  CHECK(t.frames == 2);
  CHECK(t.keypoints.precision() == doctest::Approx(0.8));
  CHECK(t.keypoints.recall() == doctest::Approx(4.0 / 7.0));
  const RateCounts none{0, 0, 0};
  CHECK(none.f1() == 1.0);
  const RateCounts zero{0, 2, 2};
  CHECK(zero.f1() == 0.0);
}
