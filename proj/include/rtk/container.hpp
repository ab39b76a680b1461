#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rtk/encoders.hpp"
#include "rtk/raster.hpp"
#include "rtk/scene.hpp"

namespace rtk {

enum class DType : std::uint8_t { f32 = 0, u8 = 1 };

/// Named row-major tensor. `data` holds the little-endian payload bytes.
struct Tensor {
  std::string name;
  DType dtype = DType::f32;
  std::vector<std::uint32_t> shape;
  std::vector<std::uint8_t> data;

  std::size_t element_count() const;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

std::size_t dtype_size(DType dtype);

/// H x W x C raster as an f32 tensor of shape {H, W, C}.
Tensor tensor_from_raster(std::string name, const Raster& raster);
/// Accepts f32 tensors of rank 2 (C = 1) or 3.
Raster raster_from_tensor(const Tensor& tensor);

/// RTK1 file: "RTK1", u32 tensor count, then per tensor u16 name length, name,
/// u8 dtype, u8 rank, rank x u32 dims and the payload. All little-endian.
class TensorContainer {
 public:
  /// Throws DuplicateName, or InvalidArgument when data and shape disagree.
  void add(Tensor tensor);
  void add(std::string name, const Raster& raster) { add(tensor_from_raster(std::move(name), raster)); }

  bool contains(const std::string& name) const;
  /// Throws SchemaViolation for a missing name.
  const Tensor& get(const std::string& name) const;
  Raster raster(const std::string& name) const { return raster_from_tensor(get(name)); }

  const std::vector<Tensor>& tensors() const noexcept { return tensors_; }
  friend bool operator==(const TensorContainer&, const TensorContainer&) = default;

 private:
  std::vector<Tensor> tensors_;
};

std::vector<std::uint8_t> serialize_container(const TensorContainer& container);
/// Throws BadMagic, TruncatedFile or DuplicateName.
TensorContainer parse_container(const std::vector<std::uint8_t>& bytes);

void save_container(const std::filesystem::path& path, const TensorContainer& container);
TensorContainer load_container(const std::filesystem::path& path);

/// Raw file helpers shared by the IO layer; failures raise IoError.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Targets as stored on disk: R, D, P, K, aff_conf, aff_lines, kp_index.
TensorContainer targets_to_container(const FieldSet& fields, const KeypointGrid& keypoints,
                                     const DenseAffinity& affinity);
KeypointGrid keypoints_from_container(const TensorContainer& c, int cell_px);
DenseAffinity affinity_from_container(const TensorContainer& c);
FieldSet fields_from_container(const TensorContainer& c, double truncation_px);

/// BEV input channels plus the observation mask ("mask") of the scene noise.
TensorContainer bev_to_container(const BevGrid& bev, const Raster& mask);
BevGrid bev_from_container(const TensorContainer& c, const GridSpec& grid);

}  // namespace rtk
