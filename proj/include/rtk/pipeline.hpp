#pragma once

#include <vector>

#include "rtk/decoders.hpp"
#include "rtk/encoders.hpp"
#include "rtk/lane_graph.hpp"
#include "rtk/scene.hpp"

namespace rtk {

/// Every training target of one pruned graph.
struct EncodedTargets {
  FieldSet fields;
  KeypointGrid keypoints;
  DenseAffinity affinity;
};

EncodedTargets encode_targets(const LaneGraph& graph, const EncoderConfig& cfg);

/// Keypoint and graph decoding of a (predicted or encoded) target set.
DecodeResult decode_targets(const KeypointGrid& keypoints, const DenseAffinity& affinity, const GridSpec& grid,
                            const EncoderConfig& cfg, double conf_threshold = kDefaultConfThreshold);

/// Ground truth of one generated scene: pruned, in-scope graph.
LaneGraph scene_ground_truth(const SceneSpec& spec);

/// Baseline input: R restricted to the pixels the scene's noise lets through.
Raster observed_distance_field(const Raster& R, const SceneSpec& spec);

}  // namespace rtk
