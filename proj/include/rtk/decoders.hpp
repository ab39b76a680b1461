#pragma once

#include <vector>

#include "rtk/encoders.hpp"
#include "rtk/lane_graph.hpp"

namespace rtk {

inline constexpr double kDefaultConfThreshold = 0.5;

/// One keypoint per cell at or above the threshold, positions refined by the
/// stored offsets, sorted by descending confidence (row-major among ties) and
/// truncated to n_max.
std::vector<DecodedKeypoint> decode_keypoints(const KeypointGrid& grid, double conf_threshold, int n_max);

struct DecodeResult {
  LaneGraph graph;
  std::vector<Diagnostic> diagnostics;  // connections that were dropped
};

/// Builds a lane graph from keypoints and a dense affinity. Node ids are the
/// dense indices of aff.kp_index. Connections at or above the threshold that
/// do not travel upward are dropped with a diagnostic. Throws
/// InconsistentIndex when kp_index names a cell absent from `kps`.
DecodeResult decode_graph(const std::vector<DecodedKeypoint>& kps, const DenseAffinity& aff,
                          double conf_threshold, const GridSpec& grid, const EncoderConfig& cfg);

}  // namespace rtk
