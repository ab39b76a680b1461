#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "rtk/baseline.hpp"
#include "rtk/cli.hpp"
#include "rtk/container.hpp"
#include "rtk/error.hpp"
#include "rtk/json_io.hpp"
#include "rtk/metrics.hpp"
#include "rtk/pipeline.hpp"
#include "rtk/topology.hpp"

namespace py = pybind11;
using namespace rtk;

namespace {

py::array_t<float> to_numpy(const Raster& r) {
  py::array_t<float> a({r.height(), r.width(), r.channels()});
  std::memcpy(a.mutable_data(), r.values().data(), r.size() * sizeof(float));
  return a;
}

Raster from_numpy(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw Error(ErrorCode::ShapeMismatch, "expected an H x W or H x W x C array");
  const int channels = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  Raster r(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), channels);
  std::memcpy(r.values().data(), a.data(), r.size() * sizeof(float));
  return r;
}

std::vector<Point> to_points(const std::vector<std::pair<double, double>>& xy) {
  std::vector<Point> out;
  for (const auto& [x, y] : xy) out.push_back({x, y});
  return out;
}

std::string graph_dumps(const LaneGraph& g) { return graph_to_json(g).dump(); }

LaneGraph graph_loads(const std::string& s) {
  std::vector<std::string> warnings;
  try {
    return graph_from_json(Json::parse(s), &warnings);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, e.what());
  }
}

py::dict report_dict(const EvalReport& r) {
  return py::module_::import("json").attr("loads")(eval_report_to_json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Road topology toolkit bindings";

  static py::exception<Error> error(m, "RtkError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_static("square", &GridSpec::square, py::arg("size"), py::arg("resolution") = 0.26,
                  py::arg("keypoint_cell") = 8)
      .def_readwrite("height", &GridSpec::height)
      .def_readwrite("width", &GridSpec::width)
      .def_readwrite("resolution", &GridSpec::resolution)
      .def_readwrite("keypoint_cell", &GridSpec::keypoint_cell)
      .def_readwrite("ego_row", &GridSpec::ego_row)
      .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; });

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def(py::init<>())
      .def_readwrite("dropout_prob", &NoiseSpec::dropout_prob)
      .def_readwrite("intensity_sigma", &NoiseSpec::intensity_sigma)
      .def_readwrite("occlusion_boxes", &NoiseSpec::occlusion_boxes);

  py::class_<SceneSpec>(m, "SceneSpec")
      .def(py::init([](std::uint64_t seed, const std::string& layout, int lanes) {
             SceneSpec s;
             s.seed = seed;
             s.layout = scene_template_from_string(layout);
             s.lanes_per_direction = lanes;
             return s;
           }),
           py::arg("seed") = 0, py::arg("template") = "straight", py::arg("lanes_per_direction") = 1)
      .def_readwrite("seed", &SceneSpec::seed)
      .def_property(
          "template", [](const SceneSpec& s) { return std::string(to_string(s.layout)); },
          [](SceneSpec& s, const std::string& t) { s.layout = scene_template_from_string(t); })
      .def_readwrite("lanes_per_direction", &SceneSpec::lanes_per_direction)
      .def_readwrite("lane_width", &SceneSpec::lane_width)
      .def_readwrite("curvature", &SceneSpec::curvature)
      .def_readwrite("noise", &SceneSpec::noise)
      .def_readwrite("grid", &SceneSpec::grid);

  py::class_<LaneGraph>(m, "LaneGraph")
      .def(py::init<>())
      .def_property_readonly("nodes",
                             [](const LaneGraph& g) {
                               py::list out;
                               for (const auto& n : g.nodes) {
                                 out.append(py::make_tuple(n.id, n.position.x, n.position.y, std::string(to_string(n.kind))));
                               }
                               return out;
                             })
      .def_property_readonly("edges",
                             [](const LaneGraph& g) {
                               py::list out;
                               for (const auto& e : g.edges) {
                                 std::vector<std::pair<double, double>> line;
                                 for (const auto& p : e.polyline) line.emplace_back(p.x, p.y);
                                 out.append(py::make_tuple(e.from, e.to, line));
                               }
                               return out;
                             })
      .def_readwrite("grid", &LaneGraph::grid)
      .def("to_json", &graph_dumps)
      .def_static("from_json", &graph_loads)
      .def("__len__", [](const LaneGraph& g) { return g.nodes.size(); });

  py::class_<MassFunction>(m, "MassFunction")
      .def(py::init([](double o, double f, double u) { return MassFunction{o, f, u}; }), py::arg("occupied") = 0.0,
           py::arg("free") = 0.0, py::arg("unknown") = 1.0)
      .def_readwrite("occupied", &MassFunction::occupied)
      .def_readwrite("free", &MassFunction::free)
      .def_readwrite("unknown", &MassFunction::unknown)
      .def("__repr__", [](const MassFunction& x) {
        return "MassFunction(" + std::to_string(x.occupied) + ", " + std::to_string(x.free) + ", " +
               std::to_string(x.unknown) + ")";
      });
  m.def("ds_combine", &ds_combine);
  m.def("occupancy_value", &occupancy_value);

  m.def(
      "generate_scene", [](const SceneSpec& s) { return generate_scene(s).first; },
      "In-scope lane graph of a synthetic scene (before pruning)");
  m.def("ground_truth", &scene_ground_truth, "Pruned ground-truth graph of a synthetic scene");
  m.def(
      "prune_graph", [](const LaneGraph& g) { return prune_graph(g); }, "Cell merge and pass-through splicing");
  m.def("structurally_equal", &structurally_equal, py::arg("a"), py::arg("b"), py::arg("tolerance") = 1e-9);
  m.def(
      "rasterize", [](const LaneGraph& g, const SceneSpec& s) {
        const BevGrid b = rasterize_channels(g, s);
        py::dict d;
        d["occupancy"] = to_numpy(b.occupancy);
        d["ground_semantics"] = to_numpy(b.ground_semantics);
        d["ground_markings"] = to_numpy(b.ground_markings);
        d["lidar_intensity"] = to_numpy(b.lidar_intensity);
        d["mask"] = to_numpy(observation_mask(s));
        return d;
      },
      "BEV input channels and observation mask");

  m.def(
      "encode",
      [](const LaneGraph& g, double truncation_px, int anchor_step, int n_max, int n_rmax) {
        EncoderConfig cfg{truncation_px, anchor_step, n_max, n_rmax};
        const auto t = encode_targets(g, cfg);
        py::dict d;
        d["R"] = to_numpy(t.fields.R);
        d["D"] = to_numpy(t.fields.D);
        d["P"] = to_numpy(t.fields.P);
        d["K"] = to_numpy(t.keypoints.tensor);
        d["aff_conf"] = to_numpy(t.affinity.conf);
        d["aff_lines"] = to_numpy(t.affinity.lines);
        std::vector<std::pair<int, int>> idx;
        for (const auto& c : t.affinity.kp_index) idx.emplace_back(c.row, c.col);
        d["kp_index"] = idx;
        return d;
      },
      py::arg("graph"), py::arg("truncation_px") = 14.0, py::arg("anchor_step") = 4, py::arg("n_max") = 16,
      py::arg("n_rmax") = 30);

  m.def(
      "decode",
      [](py::array_t<float> K, py::array_t<float> aff_conf, py::array_t<float> aff_lines,
         const std::vector<std::pair<int, int>>& kp_index, const GridSpec& grid, double conf_threshold,
         int anchor_step) {
        KeypointGrid kg{from_numpy(K), grid.keypoint_cell};
        DenseAffinity aff;
        aff.conf = from_numpy(aff_conf);
        aff.lines = from_numpy(aff_lines);
        aff.n_max = aff.conf.height();
        aff.n_rmax = aff.lines.channels() - 1;
        for (const auto& [r, c] : kp_index) aff.kp_index.push_back({r, c});
        EncoderConfig cfg;
        cfg.anchor_step_px = anchor_step;
        cfg.n_max = aff.n_max;
        cfg.n_rmax = aff.n_rmax;
        return decode_targets(kg, aff, grid, cfg, conf_threshold).graph;
      },
      py::arg("K"), py::arg("aff_conf"), py::arg("aff_lines"), py::arg("kp_index"), py::arg("grid") = GridSpec{},
      py::arg("conf_threshold") = kDefaultConfThreshold, py::arg("anchor_step") = 4);

  m.def(
      "baseline",
      [](py::array_t<float> R, const std::vector<std::pair<double, double>>& keypoints, double dt,
         const GridSpec& grid) {
        const auto kps = to_points(keypoints);
        return baseline_graph(baseline_predict(from_numpy(R), kps, dt), kps, grid);
      },
      py::arg("R"), py::arg("keypoints"), py::arg("dt") = kDefaultDistanceThreshold, py::arg("grid") = GridSpec{});

  m.def(
      "evaluate",
      [](const LaneGraph& pred, const LaneGraph& gt, double tol_px) {
        return report_dict(evaluate_frame(pred, gt, {tol_px, 4}));
      },
      py::arg("pred"), py::arg("gt"), py::arg("tol_px") = kDefaultMatchTolerancePx);

  m.def(
      "match_keypoints",
      [](const std::vector<std::pair<double, double>>& pred, const std::vector<std::pair<double, double>>& gt,
         double tol_px) { return match_keypoints(to_points(pred), to_points(gt), tol_px).pairs; },
      py::arg("pred"), py::arg("gt"), py::arg("tol_px") = kDefaultMatchTolerancePx);

  m.def("mae", [](py::array_t<float> a, py::array_t<float> b) { return mae(from_numpy(a), from_numpy(b)); });
  m.def("ssim", [](py::array_t<float> a, py::array_t<float> b) { return ssim_mean(from_numpy(a), from_numpy(b)); });
  m.def(
      "complexity_bucket", [](int k) { return std::string(to_string(complexity_bucket(k))); },
      "easy / medium / difficult for a keypoint count");

  m.def(
      "cli", [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"rtk"};
        argv.insert(argv.end(), args.begin(), args.end());
        return cli_main(argv);
      },
      "Runs the rtk command line with the given arguments and returns its exit code");
}
