#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "rtk/encoders.hpp"
#include "rtk/lane_graph.hpp"
#include "rtk/scene.hpp"

namespace rtk {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Image() = default;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}
  std::uint8_t* px(int row, int col) { return rgb.data() + (static_cast<std::size_t>(row) * width + col) * 3; }
  const std::uint8_t* px(int row, int col) const {
    return rgb.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
  friend bool operator==(const Image&, const Image&) = default;
};

struct RenderLayers {
  bool input = false;
  bool R = false;
  bool D = false;
  bool P = false;
  bool keypoints = true;
  bool connections = true;

  /// Comma-separated subset of input,R,D,P,keypoints,connections (or "all").
  static RenderLayers parse(std::string_view csv);
};

/// Whatever is available for one scene; missing parts render nothing.
struct SceneView {
  GridSpec grid;
  const LaneGraph* graph = nullptr;
  const BevGrid* input = nullptr;
  const FieldSet* fields = nullptr;
};

/// Layers are rendered separately and summed with saturation, so a render of
/// a layer union equals the saturated sum of the renders of its parts.
/// Connections are drawn through their anchor-resampled reference lines.
Image render_scene(const SceneView& view, const RenderLayers& layers, const EncoderConfig& cfg = {});
Image render_layer(const SceneView& view, std::string_view layer, const EncoderConfig& cfg = {});
Image side_by_side(const Image& left, const Image& right);

void write_png(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path);

}  // namespace rtk
