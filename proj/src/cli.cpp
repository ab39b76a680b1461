#include "rtk/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "rtk/baseline.hpp"
#include "rtk/container.hpp"
#include "rtk/error.hpp"
#include "rtk/json_io.hpp"
#include "rtk/metrics.hpp"
#include "rtk/parallel.hpp"
#include "rtk/pipeline.hpp"
#include "rtk/render.hpp"
#include "rtk/topology.hpp"

namespace fs = std::filesystem;

namespace rtk {

SceneTemplate template_for_seed(std::uint64_t seed) {
  return kAllTemplates[seed % std::size(kAllTemplates)];
}

int lanes_for_seed(std::uint64_t seed) { return 1 + static_cast<int>((seed / std::size(kAllTemplates)) % 4); }

namespace {

struct Common {
  int grid_size = 128;
  double truncation_px = 14.0;
  int anchor_step = 4;
  int n_max = 16;
  int n_rmax = 0;  // 0: enough anchors for a full-height line of the grid
  int threads = 1;
  std::string out_dir;

  GridSpec grid() const { return GridSpec::square(grid_size); }

  EncoderConfig encoder() const {
    EncoderConfig cfg;
    cfg.truncation_px = truncation_px;
    cfg.anchor_step_px = anchor_step;
    cfg.n_max = n_max;
    // Lines span rows H-2 .. 2 at most.
    cfg.n_rmax = n_rmax > 0 ? n_rmax : (grid_size - 4 + anchor_step - 1) / anchor_step - 1;
    cfg.validate();
    return cfg;
  }
};

void add_grid_flags(CLI::App* app, Common& c) {
  app->add_option("--grid-size", c.grid_size, "Square grid edge in pixels")->check(CLI::IsMember({128, 256}));
}

void add_encoder_flags(CLI::App* app, Common& c) {
  app->add_option("--truncation-px", c.truncation_px, "Truncation of the inverse distance field")
      ->check(CLI::PositiveNumber);
  app->add_option("--anchor-step", c.anchor_step, "Row step between anchors")->check(CLI::PositiveNumber);
  app->add_option("--n-max", c.n_max, "Keypoints per dense affinity")->check(CLI::PositiveNumber);
  app->add_option("--n-rmax", c.n_rmax, "Interior anchors per line (default: fits the grid)");
}

void add_threads(CLI::App* app, Common& c) {
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1, 256));
}

std::string scene_name(std::uint64_t seed) {
  std::string s = std::to_string(seed);
  if (s.size() < 6) s.insert(0, 6 - s.size(), '0');
  return "scene_" + s;
}

ManifestFile write_container(const fs::path& root, const std::string& rel, const TensorContainer& c) {
  const auto bytes = serialize_container(c);
  write_file_bytes(root / rel, bytes);
  return {rel, sha256_hex(bytes)};
}

ManifestFile write_json(const fs::path& root, const std::string& rel, const Json& j) {
  const std::string s = j.dump(2) + "\n";
  const std::vector<std::uint8_t> bytes(s.begin(), s.end());
  write_file_bytes(root / rel, bytes);
  return {rel, sha256_hex(bytes)};
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// ---- generate

struct GenerateOpts {
  std::uint64_t seed = 0;
  int count = 1;
  std::string layout = "all";
  int lanes = 0;
  double lane_width = 3.65;
  double curvature = 0.01;
  double dropout = 0.0;
  double intensity_sigma = 0.0;
  int occlusion_boxes = 0;
};

int run_generate(const GenerateOpts& o, const Common& c) {
  const GridSpec grid = c.grid();
  const EncoderConfig cfg = c.encoder();
  const fs::path root = c.out_dir;
  std::optional<SceneTemplate> fixed;
  if (o.layout != "all") fixed = scene_template_from_string(o.layout);

  std::vector<SceneSpec> specs;
  for (int i = 0; i < o.count; ++i) {
    SceneSpec s;
    s.seed = o.seed + static_cast<std::uint64_t>(i);
    s.layout = fixed.value_or(template_for_seed(s.seed));
    s.lanes_per_direction = o.lanes > 0 ? o.lanes : lanes_for_seed(s.seed);
    s.lane_width = o.lane_width;
    s.curvature = o.curvature;
    s.noise = {o.dropout, o.intensity_sigma, o.occlusion_boxes};
    s.grid = grid;
    s.validate();
    specs.push_back(s);
  }

  fs::create_directories(root);
  std::vector<std::optional<ManifestEntry>> entries(specs.size());
  std::vector<std::string> skipped(specs.size());
  parallel_for(specs.size(), c.threads, [&](std::size_t i) {
    const SceneSpec& spec = specs[i];
    LaneGraph raw, gt;
    EncodedTargets targets;
    try {
      auto [graph, ego] = generate_scene(spec);
      raw = std::move(graph);
      gt = prune_graph(scope_filter(raw, ego));
      targets = encode_targets(gt, cfg);
    } catch (const Error& e) {
      if (e.is_io()) throw;
      skipped[i] = e.what();
      return;
    }
    ManifestEntry e;
    e.name = scene_name(spec.seed);
    e.spec = spec;
    e.spec_digest = spec_digest(spec);
    e.keypoints = static_cast<int>(gt.nodes.size());
    fs::create_directories(root / e.name);
    e.grid = write_container(root, e.name + "/grid.rtk",
                             bev_to_container(rasterize_channels(raw, spec), observation_mask(spec)));
    e.targets = write_container(root, e.name + "/targets.rtk",
                                targets_to_container(targets.fields, targets.keypoints, targets.affinity));
    e.graph = write_json(root, e.name + "/graph.json", graph_to_json(gt));
    entries[i] = std::move(e);
  });

  DatasetManifest m;
  m.grid = grid;
  m.encoder = cfg;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (entries[i]) {
      m.scenes.push_back(std::move(*entries[i]));
    } else {
      m.skipped.emplace_back(specs[i].seed, skipped[i]);
      std::cerr << "warning: seed " << specs[i].seed << " skipped: " << skipped[i] << "\n";
    }
  }
  save_manifest(root / "manifest.json", m);
  std::cout << "generated " << m.scenes.size() << " scenes (" << m.skipped.size() << " skipped) in " << root.string()
            << "\n";
  return 0;
}

// ---- encode

int run_encode(const std::string& graph_path, const std::string& out, const Common& c) {
  std::vector<std::string> warnings;
  const LaneGraph g = load_graph_json(graph_path, &warnings);
  print_warnings(warnings);
  const auto t = encode_targets(g, c.encoder());
  save_container(out, targets_to_container(t.fields, t.keypoints, t.affinity));
  return 0;
}

// ---- decode

LaneGraph decode_file(const fs::path& targets_path, const GridSpec& grid, const EncoderConfig& cfg, double thr,
                      const std::string& label) {
  const TensorContainer tc = load_container(targets_path);
  const auto res = decode_targets(keypoints_from_container(tc, grid.keypoint_cell), affinity_from_container(tc), grid,
                                  cfg, thr);
  for (const auto& d : res.diagnostics) std::cerr << "note: " << label << ": dropped connection: " << d.message << "\n";
  return res.graph;
}

struct BatchOpts {
  std::string manifest;
  std::string targets;
  std::string out;
  double conf_threshold = kDefaultConfThreshold;
  double dt = kDefaultDistanceThreshold;
  std::string keypoints;
  std::string grid_file;
  bool observed = false;
};

GridSpec grid_of_targets(const TensorContainer& tc) {
  const Tensor& r = tc.get("R");
  if (r.shape.size() < 2 || r.shape[0] != r.shape[1]) throw Error(ErrorCode::SchemaViolation, "R must be square");
  return GridSpec::square(static_cast<int>(r.shape[0]));
}

int run_decode(const BatchOpts& o, const Common& c) {
  if (!o.manifest.empty()) {
    const fs::path mpath = o.manifest;
    const DatasetManifest m = load_manifest(mpath);
    const fs::path out = c.out_dir;
    fs::create_directories(out);
    parallel_for(m.scenes.size(), c.threads, [&](std::size_t i) {
      const auto& e = m.scenes[i];
      const LaneGraph g = decode_file(mpath.parent_path() / e.targets.path, m.grid, m.encoder, o.conf_threshold, e.name);
      save_graph_json(out / (e.name + ".json"), g);
    });
    return 0;
  }
  const TensorContainer tc = load_container(o.targets);
  const GridSpec grid = grid_of_targets(tc);
  EncoderConfig cfg = c.encoder();
  const DenseAffinity aff = affinity_from_container(tc);
  cfg.n_max = aff.n_max;
  cfg.n_rmax = aff.n_rmax;
  const auto res = decode_targets(keypoints_from_container(tc, grid.keypoint_cell), aff, grid, cfg, o.conf_threshold);
  for (const auto& d : res.diagnostics) std::cerr << "note: dropped connection: " << d.message << "\n";
  save_graph_json(o.out, res.graph);
  return 0;
}

// ---- baseline

LaneGraph baseline_for(const Raster& R, const std::vector<Point>& kps, const GridSpec& grid, double dt, int step) {
  return baseline_graph(baseline_predict(R, kps, dt, step), kps, grid);
}

Raster masked(const Raster& R, const TensorContainer& grid_tc) {
  const Raster mask = grid_tc.raster("mask");
  if (mask.height() != R.height() || mask.width() != R.width()) {
    throw Error(ErrorCode::ShapeMismatch, "mask does not match R");
  }
  Raster out = R;
  for (int r = 0; r < R.height(); ++r) {
    for (int col = 0; col < R.width(); ++col) {
      if (mask.at(r, col) == 0.0f) out.at(r, col) = 0.0f;
    }
  }
  return out;
}

int run_baseline(const BatchOpts& o, const Common& c) {
  if (!o.manifest.empty()) {
    const fs::path mpath = o.manifest;
    const fs::path root = mpath.parent_path();
    const DatasetManifest m = load_manifest(mpath);
    const fs::path out = c.out_dir;
    fs::create_directories(out);
    parallel_for(m.scenes.size(), c.threads, [&](std::size_t i) {
      const auto& e = m.scenes[i];
      const TensorContainer tc = load_container(root / e.targets.path);
      Raster R = tc.raster("R");
      if (o.observed) R = masked(R, load_container(root / e.grid.path));
      const LaneGraph gt = load_graph_json(root / e.graph.path);
      save_graph_json(out / (e.name + ".json"),
                      baseline_for(R, node_positions(gt), m.grid, o.dt, m.encoder.anchor_step_px));
    });
    return 0;
  }
  const TensorContainer tc = load_container(o.targets);
  const GridSpec grid = grid_of_targets(tc);
  Raster R = tc.raster("R");
  if (o.observed) {
    if (o.grid_file.empty()) throw Error(ErrorCode::InvalidArgument, "--observed needs --grid");
    R = masked(R, load_container(o.grid_file));
  }
  std::vector<Point> kps;
  if (!o.keypoints.empty()) {
    std::vector<std::string> warnings;
    kps = node_positions(load_graph_json(o.keypoints, &warnings));
    print_warnings(warnings);
  } else {
    for (const auto& k : decode_keypoints(keypoints_from_container(tc, grid.keypoint_cell), o.conf_threshold,
                                          c.encoder().n_max)) {
      kps.push_back(k.position);
    }
  }
  save_graph_json(o.out, baseline_for(R, kps, grid, o.dt, c.anchor_step));
  return 0;
}

// ---- eval

struct EvalOpts {
  std::string manifest;
  std::string pred_dir;
  std::string pred;
  std::string gt;
  std::string pred_targets;
  std::string gt_targets;
  std::string out;
  double tol_px = kDefaultMatchTolerancePx;
};

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out, j);
  }
}

void print_bucket_table(const std::map<ComplexityBucket, EvalAggregate>& buckets, const EvalReport& total) {
  std::printf("%-10s %7s %8s %8s %8s %8s %8s %8s %10s\n", "bucket", "frames", "kp_P", "kp_R", "kp_F1", "conn_P",
              "conn_R", "conn_F1", "offset_cm");
  const auto row = [](const char* name, const EvalReport& r) {
    std::printf("%-10s %7lld %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %10.3f\n", name, static_cast<long long>(r.frames),
                r.keypoints.precision(), r.keypoints.recall(), r.keypoints.f1(), r.connectivity.counts.precision(),
                r.connectivity.counts.recall(), r.connectivity.counts.f1(), r.connectivity.avg_offset_cm());
  };
  for (const auto& [b, agg] : buckets) row(std::string(to_string(b)).c_str(), agg.total());
  row("all", total);
}

int run_eval(const EvalOpts& o, const Common& c) {
  EvalOptions opts{o.tol_px, c.anchor_step};
  if (!o.manifest.empty()) {
    if (o.pred_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--manifest needs --pred-dir");
    const fs::path mpath = o.manifest;
    const fs::path root = mpath.parent_path();
    const DatasetManifest m = load_manifest(mpath);
    opts.anchor_step = m.encoder.anchor_step_px;
    std::vector<EvalReport> frames(m.scenes.size());
    parallel_for(m.scenes.size(), c.threads, [&](std::size_t i) {
      const auto& e = m.scenes[i];
      const LaneGraph gt = load_graph_json(root / e.graph.path);
      const LaneGraph pred = load_graph_json(fs::path(o.pred_dir) / (e.name + ".json"));
      const fs::path pred_fields = fs::path(o.pred_dir) / (e.name + ".rtk");
      if (fs::exists(pred_fields)) {
        const FieldSet pf = fields_from_container(load_container(pred_fields), m.encoder.truncation_px);
        const FieldSet gf = fields_from_container(load_container(root / e.targets.path), m.encoder.truncation_px);
        frames[i] = evaluate_frame(pred, gt, opts, &pf, &gf);
      } else {
        frames[i] = evaluate_frame(pred, gt, opts);
      }
    });
    EvalAggregate total;
    std::map<ComplexityBucket, EvalAggregate> buckets;
    Json per_frame = Json::array();
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto bucket = complexity_bucket(m.scenes[i].keypoints);
      total.add(frames[i]);
      buckets[bucket].add(frames[i]);
      per_frame.push_back(Json{{"name", m.scenes[i].name},
                               {"complexity_bucket", std::string(to_string(bucket))},
                               {"report", eval_report_to_json(frames[i])}});
    }
    Json by_bucket = Json::object();
    for (const auto& [b, agg] : buckets) by_bucket[std::string(to_string(b))] = eval_report_to_json(agg.total());
    emit(Json{{"total", eval_report_to_json(total.total())}, {"buckets", by_bucket}, {"frames", per_frame}}, o.out);
    if (!o.out.empty()) print_bucket_table(buckets, total.total());
    return 0;
  }
  if (o.pred.empty() || o.gt.empty()) throw Error(ErrorCode::InvalidArgument, "eval needs --pred and --gt, or --manifest");
  std::vector<std::string> warnings;
  const LaneGraph pred = load_graph_json(o.pred, &warnings);
  const LaneGraph gt = load_graph_json(o.gt, &warnings);
  print_warnings(warnings);
  EvalReport r;
  if (!o.pred_targets.empty() && !o.gt_targets.empty()) {
    const FieldSet pf = fields_from_container(load_container(o.pred_targets), c.truncation_px);
    const FieldSet gf = fields_from_container(load_container(o.gt_targets), c.truncation_px);
    r = evaluate_frame(pred, gt, opts, &pf, &gf);
  } else {
    r = evaluate_frame(pred, gt, opts);
  }
  Json j = eval_report_to_json(r);
  if (!gt.nodes.empty() && static_cast<int>(gt.nodes.size()) <= kMaxSceneKeypoints) {
    j["complexity_bucket"] = std::string(to_string(complexity_bucket(gt)));
  }
  emit(j, o.out);
  return 0;
}

// ---- render

struct RenderOpts {
  std::string graph;
  std::string pred;
  std::string grid_file;
  std::string targets;
  std::string layers = "keypoints,connections";
  std::string out;
};

int run_render(const RenderOpts& o, const Common& c) {
  const RenderLayers layers = RenderLayers::parse(o.layers);
  std::optional<LaneGraph> gt, pred;
  std::optional<BevGrid> bev;
  std::optional<FieldSet> fields;
  GridSpec grid = c.grid();
  std::vector<std::string> warnings;
  if (!o.graph.empty()) {
    gt = load_graph_json(o.graph, &warnings);
    grid = gt->grid;
  }
  if (!o.pred.empty()) pred = load_graph_json(o.pred, &warnings);
  print_warnings(warnings);
  if (!o.targets.empty()) fields = fields_from_container(load_container(o.targets), c.truncation_px);
  if (!o.grid_file.empty()) bev = bev_from_container(load_container(o.grid_file), grid);
  const EncoderConfig cfg = c.encoder();

  SceneView left{grid, gt ? &*gt : nullptr, bev ? &*bev : nullptr, fields ? &*fields : nullptr};
  Image img = render_scene(left, layers, cfg);
  if (pred) {
    SceneView right{grid, &*pred, bev ? &*bev : nullptr, nullptr};
    img = side_by_side(img, render_scene(right, layers, cfg));
  }
  write_png(o.out, img);
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Road topology toolkit: synthetic scenes, targets, decoding, baseline and evaluation", "rtk"};
  app.require_subcommand(1);
  Common common;

  GenerateOpts gen;
  auto* g = app.add_subcommand("generate", "Generate scenes, targets and a manifest");
  g->add_option("--seed", gen.seed, "First seed");
  g->add_option("--count", gen.count, "Number of consecutive seeds")->check(CLI::PositiveNumber);
  g->add_option("--template", gen.layout, "Scene template or 'all' (chosen by seed)");
  g->add_option("--lanes", gen.lanes, "Lanes per direction, 0 = chosen by seed")->check(CLI::Range(0, 4));
  g->add_option("--lane-width", gen.lane_width, "Lane width in meters");
  g->add_option("--curvature", gen.curvature, "Curve template curvature in 1/m");
  g->add_option("--dropout", gen.dropout, "Per-pixel dropout probability");
  g->add_option("--intensity-sigma", gen.intensity_sigma, "Lidar intensity noise");
  g->add_option("--occlusion-boxes", gen.occlusion_boxes, "Occluding rectangles per scene");
  g->add_option("--out-dir", common.out_dir, "Output directory")->required();
  add_grid_flags(g, common);
  add_encoder_flags(g, common);
  add_threads(g, common);

  std::string graph_in, targets_out;
  auto* enc = app.add_subcommand("encode", "Encode a graph JSON into target tensors");
  enc->add_option("--graph", graph_in, "Graph JSON")->required();
  enc->add_option("--out", targets_out, "Output container")->required();
  add_encoder_flags(enc, common);

  BatchOpts dec_opts;
  auto* dec = app.add_subcommand("decode", "Decode target tensors into a graph");
  auto* dec_targets = dec->add_option("--targets", dec_opts.targets, "Targets container");
  auto* dec_manifest = dec->add_option("--manifest", dec_opts.manifest, "Decode every scene of a manifest");
  dec_targets->excludes(dec_manifest);
  dec->add_option("--out", dec_opts.out, "Output graph JSON")->needs(dec_targets);
  dec->add_option("--out-dir", common.out_dir, "Output directory for --manifest")->needs(dec_manifest);
  dec->add_option("--conf-threshold", dec_opts.conf_threshold, "Confidence threshold")->check(CLI::Range(0.0, 1.0));
  add_encoder_flags(dec, common);
  add_threads(dec, common);

  BatchOpts bl_opts;
  auto* bl = app.add_subcommand("baseline", "Shortest-path connectivity baseline");
  auto* bl_targets = bl->add_option("--targets", bl_opts.targets, "Targets container (R and K)");
  auto* bl_manifest = bl->add_option("--manifest", bl_opts.manifest, "Run on every scene with GT keypoints");
  bl_targets->excludes(bl_manifest);
  bl->add_option("--keypoints", bl_opts.keypoints, "Graph JSON whose nodes are the keypoints")->needs(bl_targets);
  bl->add_option("--grid", bl_opts.grid_file, "Input grid container (observation mask)")->needs(bl_targets);
  bl->add_flag("--observed", bl_opts.observed, "Mask R by the scene's observation mask");
  bl->add_option("--dt", bl_opts.dt, "Distance threshold: pixels with R >= dt are traversable")
      ->check(CLI::Range(0.0, 1.0));
  bl->add_option("--conf-threshold", bl_opts.conf_threshold, "Keypoint threshold when decoding K");
  bl->add_option("--out", bl_opts.out, "Output graph JSON")->needs(bl_targets);
  bl->add_option("--out-dir", common.out_dir, "Output directory for --manifest")->needs(bl_manifest);
  add_encoder_flags(bl, common);
  add_threads(bl, common);

  EvalOpts ev;
  auto* e = app.add_subcommand("eval", "Score predicted graphs against ground truth");
  e->add_option("--manifest", ev.manifest, "Dataset manifest");
  e->add_option("--pred-dir", ev.pred_dir, "Directory of <scene>.json predictions");
  e->add_option("--pred", ev.pred, "Predicted graph JSON");
  e->add_option("--gt", ev.gt, "Ground-truth graph JSON");
  e->add_option("--pred-targets", ev.pred_targets, "Predicted field container");
  e->add_option("--gt-targets", ev.gt_targets, "Ground-truth field container");
  e->add_option("--tol-px", ev.tol_px, "Keypoint match tolerance")->check(CLI::PositiveNumber);
  e->add_option("--out", ev.out, "Report JSON (default: stdout)");
  add_encoder_flags(e, common);
  add_threads(e, common);

  RenderOpts ro;
  auto* r = app.add_subcommand("render", "Render a scene to PNG");
  r->add_option("--graph", ro.graph, "Graph JSON (left panel)");
  r->add_option("--pred", ro.pred, "Predicted graph JSON (right panel)");
  r->add_option("--grid", ro.grid_file, "Input grid container");
  r->add_option("--targets", ro.targets, "Targets container for R/D/P layers");
  r->add_option("--layers", ro.layers, "input,R,D,P,keypoints,connections or all");
  r->add_option("--out", ro.out, "Output PNG")->required();
  add_grid_flags(r, common);
  add_encoder_flags(r, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands()) failed = sub;
    std::cerr << failed->help();
    return 1;
  }

  try {
    if (*g) return run_generate(gen, common);
    if (*enc) return run_encode(graph_in, targets_out, common);
    if (*dec) {
      if (dec_opts.manifest.empty() && (dec_opts.targets.empty() || dec_opts.out.empty())) {
        throw Error(ErrorCode::InvalidArgument, "decode needs --targets and --out, or --manifest and --out-dir");
      }
      if (!dec_opts.manifest.empty() && common.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--manifest needs --out-dir");
      return run_decode(dec_opts, common);
    }
    if (*bl) {
      if (bl_opts.manifest.empty() && (bl_opts.targets.empty() || bl_opts.out.empty())) {
        throw Error(ErrorCode::InvalidArgument, "baseline needs --targets and --out, or --manifest and --out-dir");
      }
      if (!bl_opts.manifest.empty() && common.out_dir.empty()) throw Error(ErrorCode::InvalidArgument, "--manifest needs --out-dir");
      return run_baseline(bl_opts, common);
    }
    if (*e) return run_eval(ev, common);
    if (*r) return run_render(ro, common);
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return ex.is_io() ? 2 : 1;
  } catch (const fs::filesystem_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<std::string> copy = args;
  std::vector<char*> argv;
  for (auto& a : copy) argv.push_back(a.data());
  argv.push_back(nullptr);
  return cli_main(static_cast<int>(copy.size()), argv.data());
}

}  // namespace rtk
