#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rtk/error.hpp"

namespace rtk {

/// Dense row-major H x W x C float32 image.
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, int channels = 1, float fill = 0.0f)
      : height_(height), width_(width), channels_(channels),
        data_(static_cast<std::size_t>(height) * width * channels, fill) {
    if (height < 0 || width < 0 || channels <= 0) {
      throw Error(ErrorCode::InvalidArgument, "raster dimensions must be non-negative");
    }
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int row, int col, int ch = 0) { return data_[index(row, col, ch)]; }
  float at(int row, int col, int ch = 0) const { return data_[index(row, col, ch)]; }

  std::span<float> pixel(int row, int col) {
    return {data_.data() + index(row, col, 0), static_cast<std::size_t>(channels_)};
  }
  std::span<const float> pixel(int row, int col) const {
    return {data_.data() + index(row, col, 0), static_cast<std::size_t>(channels_)};
  }

  std::span<float> values() noexcept { return data_; }
  std::span<const float> values() const noexcept { return data_; }

  bool same_shape(const Raster& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int row, int col, int ch) const noexcept {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 1;
  std::vector<float> data_;
};

inline void require_same_shape(const Raster& a, const Raster& b, const char* what) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, what);
}

}  // namespace rtk
