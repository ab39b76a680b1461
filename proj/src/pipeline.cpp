#include "rtk/pipeline.hpp"

#include "rtk/error.hpp"
#include "rtk/topology.hpp"

namespace rtk {

EncodedTargets encode_targets(const LaneGraph& graph, const EncoderConfig& cfg) {
  EncodedTargets t;
  t.fields = encode_fields(graph, cfg);
  t.keypoints = encode_keypoint_grid(graph, cfg);
  t.affinity = encode_affinity(graph, t.keypoints, cfg);
  return t;
}

DecodeResult decode_targets(const KeypointGrid& keypoints, const DenseAffinity& affinity, const GridSpec& grid,
                            const EncoderConfig& cfg, double conf_threshold) {
  const auto kps = decode_keypoints(keypoints, conf_threshold, cfg.n_max);
  return decode_graph(kps, affinity, conf_threshold, grid, cfg);
}

LaneGraph scene_ground_truth(const SceneSpec& spec) {
  auto [graph, ego] = generate_scene(spec);
  return prune_graph(scope_filter(graph, ego));
}

Raster observed_distance_field(const Raster& R, const SceneSpec& spec) {
  const Raster mask = observation_mask(spec);
  if (mask.height() != R.height() || mask.width() != R.width()) {
    throw Error(ErrorCode::ShapeMismatch, "scene grid does not match the distance field");
  }
  Raster out = R;
  for (int r = 0; r < R.height(); ++r) {
    for (int c = 0; c < R.width(); ++c) {
      if (mask.at(r, c) == 0.0f) out.at(r, c) = 0.0f;
    }
  }
  return out;
}

}  // namespace rtk
