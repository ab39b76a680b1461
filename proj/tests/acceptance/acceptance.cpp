// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rtk/baseline.hpp"
#include "rtk/cli.hpp"
#include "rtk/container.hpp"
#include "rtk/error.hpp"
#include "rtk/json_io.hpp"
#include "rtk/metrics.hpp"
#include "rtk/pipeline.hpp"
#include "rtk/topology.hpp"

using namespace rtk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SceneSpec batch_spec(std::uint64_t seed) {
  SceneSpec spec;
  spec.seed = seed;
  spec.layout = template_for_seed(seed);
  spec.lanes_per_direction = lanes_for_seed(seed);
  return spec;
}

struct Scene {
  SceneSpec spec;
  LaneGraph gt;
};

// Canonical scene set: consecutive seeds from 0 in the batch scheme.
std::vector<Scene> canonical_scenes(int count) {
  std::vector<Scene> out;
  for (std::uint64_t seed = 0; static_cast<int>(out.size()) < count; ++seed) {
    const SceneSpec spec = batch_spec(seed);
    try {
      out.push_back({spec, scene_ground_truth(spec)});
    } catch (const Error&) {
    }
  }
  return out;
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rtk");
  return cli_main(args);
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rtk_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---- 1
Outcome round_trip(const std::vector<Scene>& scenes) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const EncoderConfig cfg;
  std::set<SceneTemplate> templates;
  std::set<ComplexityBucket> buckets;
  int mismatched = 0;
  for (const auto& s : scenes) {
    templates.insert(s.spec.layout);
    buckets.insert(complexity_bucket(s.gt));
    const EncodedTargets t = encode_targets(s.gt, cfg);
    const DecodeResult d = decode_targets(t.keypoints, t.affinity, s.gt.grid, cfg);
    bool same = d.diagnostics.empty() && d.graph.nodes.size() == s.gt.nodes.size() &&
                d.graph.edges.size() == s.gt.edges.size();
    for (const auto& n : d.graph.nodes) {
      same = same && std::any_of(s.gt.nodes.begin(), s.gt.nodes.end(),
                                 [&](const LaneNode& m) { return m.position == n.position && m.kind == n.kind; });
    }
    for (const auto& e : s.gt.edges) {
      const Point from = s.gt.node(e.from).position, to = s.gt.node(e.to).position;
      const auto it = std::find_if(d.graph.edges.begin(), d.graph.edges.end(), [&](const LaneEdge& de) {
        return d.graph.node(de.from).position == from && d.graph.node(de.to).position == to;
      });
      if (it == d.graph.edges.end()) {
        same = false;
        continue;
      }
      const AnchorLine a = resample_reference_line(e, cfg);
      same = same && it->polyline.size() == a.rows.size();
      for (std::size_t k = 0; same && k < a.rows.size(); ++k) {
        same = it->polyline[k].x == a.xs[k] && it->polyline[k].y == a.rows[k];
      }
    }
    if (!same) ++mismatched;
  }

  // The same scenes through the command line: generate, decode, eval.
  const fs::path dir = scratch("round_trip");
  const std::string count = std::to_string(scenes.back().spec.seed + 1);
  int rc = run_cli({"generate", "--seed", "0", "--count", count, "--out-dir", (dir / "data").string()});
  const std::string manifest = (dir / "data" / "manifest.json").string();
  if (rc == 0) rc = run_cli({"decode", "--manifest", manifest, "--out-dir", (dir / "pred").string()});
  if (rc == 0) {
    rc = run_cli({"eval", "--manifest", manifest, "--pred-dir", (dir / "pred").string(), "--out",
                  (dir / "report.json").string()});
  }
  double kp_p = 0, kp_r = 0, kp_f = 0, c_p = 0, c_r = 0, c_f = 0, offset = -1;
  std::int64_t frames = 0;
  if (rc == 0) {
    const Json total = read_json_file(dir / "report.json")["total"];
    frames = total["frames"].get<std::int64_t>();
    kp_p = total["kp_metrics"]["precision"].get<double>();
    kp_r = total["kp_metrics"]["recall"].get<double>();
    kp_f = total["kp_metrics"]["f1"].get<double>();
    c_p = total["conn_metrics"]["precision"].get<double>();
    c_r = total["conn_metrics"]["recall"].get<double>();
    c_f = total["conn_metrics"]["f1"].get<double>();
    offset = total["conn_metrics"]["avg_offset_cm"].get<double>();
  }
  fs::remove_all(dir);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  o.pass = scenes.size() >= 500 && templates.size() == 6 && buckets.size() == 3 && mismatched == 0 && rc == 0 &&
           frames == static_cast<std::int64_t>(scenes.size()) && kp_p == 1 && kp_r == 1 && kp_f == 1 && c_p == 1 &&
           c_r == 1 && c_f == 1 && offset == 0 && secs < 60;
  o.detail = fmt("%zu scenes, %zu templates, %zu buckets, %d mismatched; eval kp P/R/F1 %.4f/%.4f/%.4f conn "
                 "%.4f/%.4f/%.4f offset %.2f cm; %.1f s",
                 scenes.size(), templates.size(), buckets.size(), mismatched, kp_p, kp_r, kp_f, c_p, c_r, c_f, offset,
                 secs);
  return o;
}

// ---- 2
Outcome losses(const std::vector<Scene>& scenes) {
  const EncoderConfig cfg;
  const LossWeights w;
  std::mt19937_64 rng(2024);
  double worst_null = 0;
  std::map<std::string, int> failures;
  std::map<std::string, int> tried;
  const auto expect_up = [&](const std::string& kind, double base, double perturbed) {
    ++tried[kind];
    if (!(perturbed > base)) ++failures[kind];
  };

  for (std::size_t si = 0; si < 100 && si < scenes.size(); ++si) {
    const LaneGraph& g = scenes[si].gt;
    const EncodedTargets t = encode_targets(g, cfg);
    const auto kps = decode_keypoints(t.keypoints, kDefaultConfThreshold, cfg.n_max);
    const AffinityAlignment al = align_affinity(kps, g, cfg);
    DenseAffinity pred_aff = t.affinity;
    pred_aff.kp_index = al.pred_cells;  // predicted frame, same content for exact keypoints
    for (int i = 0; i < static_cast<int>(al.pred_cells.size()); ++i) {
      for (int j = 0; j < static_cast<int>(al.pred_cells.size()); ++j) {
        const int gi = al.pred_to_gt[static_cast<std::size_t>(i)], gj = al.pred_to_gt[static_cast<std::size_t>(j)];
        pred_aff.conf.at(i, j) = t.affinity.conf.at(gi, gj);
        for (int k = 0; k < t.affinity.lines.channels(); ++k) pred_aff.lines.at(i, j, k) = t.affinity.lines.at(gi, gj, k);
      }
    }

    const double l1 = loss_stage1(t.fields, t.fields, w);
    const double l2 = loss_stage2(t.keypoints, t.keypoints, w);
    const double l3 = loss_stage3(pred_aff, t.affinity, al, w);
    worst_null = std::max({worst_null, std::abs(l1), std::abs(l2), std::abs(l3)});

    // Stage 1: value change, hue rotation and a one-pixel shift of each field.
    std::vector<std::pair<int, int>> band;
    for (int r = 0; r < t.fields.R.height(); ++r) {
      for (int c = 0; c < t.fields.R.width(); ++c) {
        if (t.fields.R.at(r, c) > 0) band.push_back({r, c});
      }
    }
    const auto [br, bc] = band[rng() % band.size()];
    for (int field = 0; field < 3; ++field) {
      FieldSet p = t.fields;
      Raster& f = field == 0 ? p.R : field == 1 ? p.D : p.P;
      if (field == 0) {
        f.at(br, bc) = f.at(br, bc) > 0.5f ? 0.0f : 1.0f;
      } else {
        std::swap(f.at(br, bc, 0), f.at(br, bc, 1));
        std::swap(f.at(br, bc, 1), f.at(br, bc, 2));
      }
      expect_up("field value", l1, loss_stage1(p, t.fields, w));
      FieldSet s = t.fields;
      Raster& sf = field == 0 ? s.R : field == 1 ? s.D : s.P;
      const Raster& of = field == 0 ? t.fields.R : field == 1 ? t.fields.D : t.fields.P;
      for (int r = 0; r < sf.height(); ++r) {
        for (int c = 0; c < sf.width(); ++c) {
          for (int ch = 0; ch < sf.channels(); ++ch) sf.at(r, c, ch) = c > 0 ? of.at(r, c - 1, ch) : 0.0f;
        }
      }
      expect_up("field 1-px shift", l1, loss_stage1(s, t.fields, w));
    }

    // Stage 2: confidence flips on an occupied and an empty cell, 1-px offsets.
    std::vector<Cell> occupied, empty;
    for (int r = 0; r < t.keypoints.tensor.height(); ++r) {
      for (int c = 0; c < t.keypoints.tensor.width(); ++c) {
        (t.keypoints.confidence(r, c) > 0 ? occupied : empty).push_back({r, c});
      }
    }
    for (const Cell cell : {occupied[rng() % occupied.size()], empty[rng() % empty.size()]}) {
      KeypointGrid p = t.keypoints;
      p.tensor.at(cell.row, cell.col, 0) = 1.0f - p.tensor.at(cell.row, cell.col, 0);
      expect_up("keypoint confidence flip", l2, loss_stage2(p, t.keypoints, w));
    }
    for (int ch : {1, 2}) {
      KeypointGrid p = t.keypoints;
      const Cell cell = occupied[rng() % occupied.size()];
      p.tensor.at(cell.row, cell.col, ch) += 1.0f / static_cast<float>(t.keypoints.cell_px);
      expect_up("keypoint 1-px offset", l2, loss_stage2(p, t.keypoints, w));
    }

    // Stage 3: confidence flips on a connected and an unconnected pair, anchor shifts.
    const int n = static_cast<int>(al.pred_cells.size());
    std::vector<std::pair<int, int>> linked, unlinked, shiftable;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (pred_aff.conf.at(i, j) > 0) {
          linked.push_back({i, j});
          if (std::lround(pred_aff.lines.at(i, j, 0) * cfg.max_anchors()) > 2) shiftable.push_back({i, j});
        } else {
          unlinked.push_back({i, j});
        }
      }
    }
    for (const auto* pool : {&linked, &unlinked}) {
      if (pool->empty()) continue;
      const auto [i, j] = (*pool)[rng() % pool->size()];
      DenseAffinity p = pred_aff;
      p.conf.at(i, j) = 1.0f - p.conf.at(i, j);
      expect_up("affinity confidence flip", l3, loss_stage3(p, t.affinity, al, w));
    }
    if (!shiftable.empty()) {
      const auto [i, j] = shiftable[rng() % shiftable.size()];
      const int interior = static_cast<int>(std::lround(pred_aff.lines.at(i, j, 0) * cfg.max_anchors())) - 2;
      DenseAffinity p = pred_aff;
      p.lines.at(i, j, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(interior))) +=
          1.0f / static_cast<float>(g.grid.width);
      expect_up("anchor 1-px shift", l3, loss_stage3(p, t.affinity, al, w));
    }
  }

  Outcome o;
  int total_fail = 0;
  std::string kinds;
  for (const auto& [kind, count] : tried) {
    total_fail += failures[kind];
    kinds += fmt("%s %d/%d, ", kind.c_str(), count - failures[kind], count);
  }
  o.pass = worst_null <= 1e-6 && total_fail == 0 && tried.size() == 6;
  o.detail = fmt("max GT-vs-GT loss %.2e; positive: %s", worst_null, kinds.substr(0, kinds.size() - 2).c_str());
  return o;
}

// Connectivity of the baseline run on GT keypoints.
ConnectivityMetrics baseline_on(const std::vector<const Scene*>& scenes, const NoiseSpec& noise) {
  const EncoderConfig cfg;
  ConnectivityMetrics total;
  for (const Scene* s : scenes) {
    SceneSpec spec = s->spec;
    spec.noise = noise;
    const Raster R = observed_distance_field(encode_distance_field(s->gt, cfg), spec);
    const auto kps = node_positions(s->gt);
    const LaneGraph pred = baseline_graph(baseline_predict(R, kps, kDefaultDistanceThreshold), kps, s->gt.grid);
    const auto m = match_keypoints(node_positions(pred), kps, kDefaultMatchTolerancePx);
    const ConnectivityMetrics c = eval_connectivity(pred, s->gt, m);
    total.counts += c.counts;
    total.offset_sum_cm += c.offset_sum_cm;
    total.offset_edges += c.offset_edges;
  }
  return total;
}

std::map<ComplexityBucket, std::vector<const Scene*>> by_bucket(const std::vector<Scene>& scenes, std::size_t per) {
  std::map<ComplexityBucket, std::vector<const Scene*>> out;
  for (const auto& s : scenes) {
    auto& v = out[complexity_bucket(s.gt)];
    if (v.size() < per) v.push_back(&s);
  }
  return out;
}

// ---- 3
Outcome baseline_quality(const std::vector<Scene>& scenes) {
  const auto buckets = by_bucket(scenes, 200);
  const auto& easy = buckets.at(ComplexityBucket::easy);
  const ConnectivityMetrics clean = baseline_on(easy, {});
  const ConnectivityMetrics heavy = baseline_on(easy, NoiseSpec{0.5, 0.0, 3});
  const double drop = clean.counts.f1() - heavy.counts.f1();
  Outcome o;
  o.pass = clean.counts.precision() >= 0.9 && clean.counts.recall() >= 0.9 && clean.avg_offset_cm() <= 26.0 &&
           drop >= 0.15;
  o.detail = fmt("%zu easy scenes; clean P/R %.3f/%.3f offset %.1f cm; heavy noise F1 %.3f -> %.3f (drop %.3f)",
                 easy.size(), clean.counts.precision(), clean.counts.recall(), clean.avg_offset_cm(),
                 clean.counts.f1(), heavy.counts.f1(), drop);
  return o;
}

// ---- 4
Outcome complexity_trend() {
  // Consecutive seeds until every bucket holds `per` scenes.
  const std::size_t per = 150;
  std::vector<Scene> scenes;
  std::map<ComplexityBucket, std::size_t> filled;
  for (std::uint64_t seed = 0; filled.size() < 3 || std::any_of(filled.begin(), filled.end(), [&](const auto& kv) {
                                 return kv.second < per;
                               });
       ++seed) {
    const SceneSpec spec = batch_spec(seed);
    try {
      Scene s{spec, scene_ground_truth(spec)};
      if (filled[complexity_bucket(s.gt)]++ < per) scenes.push_back(std::move(s));
    } catch (const Error&) {
    }
  }
  const auto buckets = by_bucket(scenes, per);
  const NoiseSpec moderate{0.1, 0.0, 1};
  std::array<double, 3> f1{};
  std::array<std::size_t, 3> n{};
  for (const auto& [b, list] : buckets) {
    f1[static_cast<std::size_t>(b)] = baseline_on(list, moderate).counts.f1();
    n[static_cast<std::size_t>(b)] = list.size();
  }
  Outcome o;
  o.pass = n[0] >= 100 && n[1] >= 100 && n[2] >= 100 && f1[0] >= f1[1] && f1[1] >= f1[2];
  o.detail = fmt("connectivity F1 easy %.3f (%zu) medium %.3f (%zu) difficult %.3f (%zu) at dropout 0.1, 1 box",
                 f1[0], n[0], f1[1], n[1], f1[2], n[2]);
  return o;
}

// ---- 5
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

// Every multiset of up to `max` sites.
void multisets(int sites, int max, std::vector<int>& cur, int start, std::vector<std::vector<int>>& out) {
  out.push_back(cur);
  if (static_cast<int>(cur.size()) == max) return;
  for (int s = start; s < sites; ++s) {
    cur.push_back(s);
    multisets(sites, max, cur, s, out);
    cur.pop_back();
  }
}

Outcome algebra(const std::vector<Scene>& scenes) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto random_mass = [&] {
    const double a = u(rng), b = u(rng), c = u(rng) + 1e-3;
    const double s = a + b + c;
    return MassFunction{a / s, b / s, c / s};
  };
  const auto diff = [](const MassFunction& a, const MassFunction& b) {
    return std::max({std::abs(a.occupied - b.occupied), std::abs(a.free - b.free), std::abs(a.unknown - b.unknown)});
  };
  double ds_err = 0;
  for (int i = 0; i < 10000; ++i) {
    const MassFunction a = random_mass(), b = random_mass(), c = random_mass();
    ds_err = std::max({ds_err, diff(ds_combine(a, b), ds_combine(b, a)),
                       diff(ds_combine(ds_combine(a, b), c), ds_combine(a, ds_combine(b, c))),
                       diff(ds_combine(a, MassFunction::vacuous()), a)});
  }

  int prune_bad = 0;
  for (const auto& s : scenes) {
    std::set<Cell> cells;
    for (const auto& n : s.gt.nodes) cells.insert(cell_of(n.position, s.gt.grid.keypoint_cell));
    if (cells.size() != s.gt.nodes.size() || !structurally_equal(prune_graph(s.gt), s.gt)) ++prune_bad;
  }

  // Sites on a 2 x 3 lattice 4 px apart; a 5 px tolerance links lattice neighbours only.
  std::vector<Point> sites;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) sites.push_back({4.0 * c, 4.0 * r});
  }
  std::vector<std::vector<int>> sets;
  std::vector<int> cur;
  multisets(static_cast<int>(sites.size()), 5, cur, 0, sets);
  long instances = 0, match_bad = 0;
  for (const auto& ps : sets) {
    for (const auto& gs : sets) {
      std::vector<Point> pred, gt;
      for (int i : ps) pred.push_back(sites[static_cast<std::size_t>(i)]);
      for (int i : gs) gt.push_back(sites[static_cast<std::size_t>(i)]);
      ++instances;
      if (match_keypoints(pred, gt, 5.0).counts.tp != brute_force_matching(pred, gt, 5.0)) ++match_bad;
    }
  }

  double img_err = 0;
  for (int i = 0; i < 100; ++i) {
    const int h = 4 + static_cast<int>(rng() % 60), w = 4 + static_cast<int>(rng() % 60);
    Raster x(h, w);
    for (float& v : x.values()) v = static_cast<float>(u(rng));
    img_err = std::max({img_err, std::abs(ssim(x, x) - 1.0), mae(x, x)});
  }

  Outcome o;
  o.pass = ds_err <= 1e-9 && prune_bad == 0 && match_bad == 0 && img_err <= 1e-9;
  o.detail = fmt("ds max error %.1e over 1e4 triples; prune violations %d/%zu; matching %ld/%ld optimal; "
                 "ssim/mae identity error %.1e",
                 ds_err, prune_bad, scenes.size(), instances - match_bad, instances, img_err);
  return o;
}

// ---- 6
Outcome field_consistency(const std::vector<Scene>& scenes) {
  const EncoderConfig cfg;
  long support_bad = 0, pixels = 0;
  double hue_err = 0;
  for (const auto& s : scenes) {
    const FieldSet f = encode_fields(s.gt, cfg);
    for (int r = 0; r < f.R.height(); ++r) {
      for (int c = 0; c < f.R.width(); ++c) {
        const bool on = f.R.at(r, c) > 0.0f;
        const bool d = f.D.at(r, c, 0) != 0 || f.D.at(r, c, 1) != 0 || f.D.at(r, c, 2) != 0;
        const bool p = f.P.at(r, c, 0) != 0 || f.P.at(r, c, 1) != 0 || f.P.at(r, c, 2) != 0;
        if (on != d || on != p) ++support_bad;
        if (!on) continue;
        ++pixels;
        const double hd = rgb_to_hue(f.D.at(r, c, 0), f.D.at(r, c, 1), f.D.at(r, c, 2));
        const double hp = rgb_to_hue(f.P.at(r, c, 0), f.P.at(r, c, 1), f.P.at(r, c, 2));
        const double delta = normalize_angle(2 * std::numbers::pi * (hp - hd));
        hue_err = std::max(hue_err, std::abs(delta - std::numbers::pi / 2));
      }
    }
  }
  Outcome o;
  o.pass = support_bad == 0 && hue_err <= 1e-4;
  o.detail = fmt("%zu scenes, %ld band pixels; support mismatches %ld; max hue error %.2e rad", scenes.size(), pixels,
                 support_bad, hue_err);
  return o;
}

// ---- 7
Outcome determinism() {
  const fs::path dir = scratch("determinism");
  const int rc1 = run_cli({"generate", "--seed", "7000", "--count", "50", "--threads", "1", "--dropout", "0.1",
                           "--occlusion-boxes", "1", "--out-dir", (dir / "t1").string()});
  const int rc8 = run_cli({"generate", "--seed", "7000", "--count", "50", "--threads", "8", "--dropout", "0.1",
                           "--occlusion-boxes", "1", "--out-dir", (dir / "t8").string()});
  long files = 0, differing = 0, container_bad = 0, json_bad = 0;
  if (rc1 == 0 && rc8 == 0) {
    for (const auto& entry : fs::recursive_directory_iterator(dir / "t1")) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), dir / "t1");
      ++files;
      const auto a = read_file_bytes(entry.path());
      if (!fs::exists(dir / "t8" / rel) || read_file_bytes(dir / "t8" / rel) != a) ++differing;
      if (entry.path().extension() == ".rtk") {
        if (serialize_container(parse_container(a)) != a) ++container_bad;
      } else if (entry.path().filename() == "graph.json") {
        const std::string text = graph_to_json(load_graph_json(entry.path())).dump(2) + "\n";
        if (std::vector<std::uint8_t>(text.begin(), text.end()) != a) ++json_bad;
      }
    }
    long t8_files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "t8")) t8_files += entry.is_regular_file();
    if (t8_files != files) ++differing;
  }
  fs::remove_all(dir);
  Outcome o;
  o.pass = rc1 == 0 && rc8 == 0 && files > 100 && differing == 0 && container_bad == 0 && json_bad == 0;
  o.detail = fmt("%ld files compared across 1 and 8 threads, %ld differ; container re-serialization mismatches %ld, "
                 "graph JSON mismatches %ld",
                 files, differing, container_bad, json_bad);
  return o;
}

}  // namespace

int main() {
  const std::vector<Scene> scenes = canonical_scenes(600);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"round-trip fidelity", [&] { return round_trip(scenes); }},
      {"loss nullity and positivity", [&] { return losses(scenes); }},
      {"baseline quality", [&] { return baseline_quality(scenes); }},
      {"complexity trend", [] { return complexity_trend(); }},
      {"algebraic suites", [&] { return algebra(scenes); }},
      {"field consistency", [&] { return field_consistency(scenes); }},
      {"determinism", [] { return determinism(); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
