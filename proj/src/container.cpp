#include "rtk/container.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rtk/error.hpp"

namespace rtk {

namespace {

constexpr char kMagic[4] = {'R', 'T', 'K', '1'};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  const std::uint8_t* take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::TruncatedFile, std::string("file ends inside ") + what);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint8_t u8(const char* what) { return *take(1, what); }
  std::uint16_t u16(const char* what) {
    const auto* p = take(2, what);
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32(const char* what) {
    const auto* p = take(4, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t float_bits(float f) { return std::bit_cast<std::uint32_t>(f); }

float bits_float(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return std::bit_cast<float>(v);
}

}  // namespace

std::size_t dtype_size(DType dtype) { return dtype == DType::f32 ? 4 : 1; }

std::size_t Tensor::element_count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

Tensor tensor_from_raster(std::string name, const Raster& raster) {
  Tensor t;
  t.name = std::move(name);
  t.dtype = DType::f32;
  t.shape = {static_cast<std::uint32_t>(raster.height()), static_cast<std::uint32_t>(raster.width()),
             static_cast<std::uint32_t>(raster.channels())};
  t.data.reserve(raster.size() * 4);
  for (float v : raster.values()) put_u32(t.data, float_bits(v));
  return t;
}

Raster raster_from_tensor(const Tensor& t) {
  if (t.dtype != DType::f32 || (t.shape.size() != 2 && t.shape.size() != 3)) {
    throw Error(ErrorCode::SchemaViolation, "tensor '" + t.name + "' is not an f32 raster");
  }
  const int channels = t.shape.size() == 3 ? static_cast<int>(t.shape[2]) : 1;
  Raster r(static_cast<int>(t.shape[0]), static_cast<int>(t.shape[1]), channels);
  auto values = r.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = bits_float(t.data.data() + 4 * i);
  return r;
}

void TensorContainer::add(Tensor tensor) {
  if (contains(tensor.name)) throw Error(ErrorCode::DuplicateName, "tensor '" + tensor.name + "' already present");
  if (tensor.name.size() > 0xffff || tensor.shape.size() > 4) {
    throw Error(ErrorCode::InvalidArgument, "tensor '" + tensor.name + "' has an oversized name or rank");
  }
  if (tensor.data.size() != tensor.element_count() * dtype_size(tensor.dtype)) {
    throw Error(ErrorCode::InvalidArgument, "tensor '" + tensor.name + "' payload does not match its shape");
  }
  tensors_.push_back(std::move(tensor));
}

bool TensorContainer::contains(const std::string& name) const {
  return std::any_of(tensors_.begin(), tensors_.end(), [&](const Tensor& t) { return t.name == name; });
}

const Tensor& TensorContainer::get(const std::string& name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return t;
  }
  throw Error(ErrorCode::SchemaViolation, "container has no tensor '" + name + "'");
}

std::vector<std::uint8_t> serialize_container(const TensorContainer& container) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(container.tensors().size()));
  for (const auto& t : container.tensors()) {
    put_u16(out, static_cast<std::uint16_t>(t.name.size()));
    out.insert(out.end(), t.name.begin(), t.name.end());
    out.push_back(static_cast<std::uint8_t>(t.dtype));
    out.push_back(static_cast<std::uint8_t>(t.shape.size()));
    for (auto d : t.shape) put_u32(out, d);
    out.insert(out.end(), t.data.begin(), t.data.end());
  }
  return out;
}

TensorContainer parse_container(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 && std::memcmp(bytes.data(), kMagic, bytes.size()) == 0) {
    throw Error(ErrorCode::TruncatedFile, "file ends inside the magic");
  }
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "not an RTK1 container");
  }
  Reader in(bytes);
  in.take(4, "magic");
  const std::uint32_t count = in.u32("tensor count");
  TensorContainer c;
  for (std::uint32_t k = 0; k < count; ++k) {
    Tensor t;
    const std::uint16_t name_len = in.u16("name length");
    const auto* name = in.take(name_len, "tensor name");
    t.name.assign(reinterpret_cast<const char*>(name), name_len);
    const std::uint8_t dtype = in.u8("dtype");
    if (dtype > 1) throw Error(ErrorCode::SchemaViolation, "tensor '" + t.name + "' has unknown dtype");
    t.dtype = static_cast<DType>(dtype);
    const std::uint8_t rank = in.u8("rank");
    if (rank > 4) throw Error(ErrorCode::SchemaViolation, "tensor '" + t.name + "' has rank above 4");
    for (std::uint8_t d = 0; d < rank; ++d) t.shape.push_back(in.u32("dims"));
    const std::size_t n = t.element_count() * dtype_size(t.dtype);
    const auto* payload = in.take(n, "payload");
    t.data.assign(payload, payload + n);
    c.add(std::move(t));
  }
  return c;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void save_container(const std::filesystem::path& path, const TensorContainer& container) {
  write_file_bytes(path, serialize_container(container));
}

TensorContainer load_container(const std::filesystem::path& path) { return parse_container(read_file_bytes(path)); }

TensorContainer targets_to_container(const FieldSet& fields, const KeypointGrid& keypoints,
                                     const DenseAffinity& affinity) {
  TensorContainer c;
  c.add("R", fields.R);
  c.add("D", fields.D);
  c.add("P", fields.P);
  c.add("K", keypoints.tensor);
  c.add("aff_conf", affinity.conf);
  c.add("aff_lines", affinity.lines);
  Tensor idx;
  idx.name = "kp_index";
  idx.dtype = DType::u8;
  idx.shape = {static_cast<std::uint32_t>(affinity.kp_index.size()), 2};
  for (const Cell& cell : affinity.kp_index) {
    if (cell.row < 0 || cell.col < 0 || cell.row > 255 || cell.col > 255) {
      throw Error(ErrorCode::OutOfRange, "keypoint cell does not fit the u8 index");
    }
    idx.data.push_back(static_cast<std::uint8_t>(cell.row));
    idx.data.push_back(static_cast<std::uint8_t>(cell.col));
  }
  c.add(std::move(idx));
  return c;
}

KeypointGrid keypoints_from_container(const TensorContainer& c, int cell_px) {
  KeypointGrid k;
  k.tensor = c.raster("K");
  k.cell_px = cell_px;
  if (k.tensor.channels() != 3) throw Error(ErrorCode::SchemaViolation, "K must have 3 channels");
  return k;
}

DenseAffinity affinity_from_container(const TensorContainer& c) {
  DenseAffinity a;
  a.conf = c.raster("aff_conf");
  a.lines = c.raster("aff_lines");
  a.n_max = a.conf.height();
  a.n_rmax = a.lines.channels() - 1;
  if (a.conf.width() != a.n_max || a.lines.height() != a.n_max || a.lines.width() != a.n_max) {
    throw Error(ErrorCode::SchemaViolation, "affinity tensors are not N x N");
  }
  const Tensor& idx = c.get("kp_index");
  if (idx.dtype != DType::u8 || idx.shape.size() != 2 || idx.shape[1] != 2) {
    throw Error(ErrorCode::SchemaViolation, "kp_index must be a u8 tensor of shape {N, 2}");
  }
  for (std::uint32_t i = 0; i < idx.shape[0]; ++i) a.kp_index.push_back({idx.data[2 * i], idx.data[2 * i + 1]});
  return a;
}

FieldSet fields_from_container(const TensorContainer& c, double truncation_px) {
  FieldSet f;
  f.R = c.raster("R");
  f.D = c.raster("D");
  f.P = c.raster("P");
  f.truncation_px = truncation_px;
  return f;
}

TensorContainer bev_to_container(const BevGrid& bev, const Raster& mask) {
  TensorContainer c;
  c.add("occupancy", bev.occupancy);
  c.add("ground_semantics", bev.ground_semantics);
  c.add("ground_markings", bev.ground_markings);
  c.add("lidar_intensity", bev.lidar_intensity);
  Raster mass(bev.grid.height, bev.grid.width, 3);
  for (int r = 0; r < bev.grid.height; ++r) {
    for (int col = 0; col < bev.grid.width; ++col) {
      const MassFunction& m = bev.occupancy_mass[static_cast<std::size_t>(r) * bev.grid.width + col];
      mass.at(r, col, 0) = static_cast<float>(m.occupied);
      mass.at(r, col, 1) = static_cast<float>(m.free);
      mass.at(r, col, 2) = static_cast<float>(m.unknown);
    }
  }
  c.add("occupancy_mass", mass);
  c.add("mask", mask);
  return c;
}

BevGrid bev_from_container(const TensorContainer& c, const GridSpec& grid) {
  BevGrid bev(grid);
  bev.occupancy = c.raster("occupancy");
  bev.ground_semantics = c.raster("ground_semantics");
  bev.ground_markings = c.raster("ground_markings");
  bev.lidar_intensity = c.raster("lidar_intensity");
  const Raster mass = c.raster("occupancy_mass");
  if (bev.occupancy.height() != grid.height || bev.occupancy.width() != grid.width || mass.channels() != 3 ||
      !mass.same_shape(Raster(grid.height, grid.width, 3))) {
    throw Error(ErrorCode::ShapeMismatch, "BEV tensors do not match the grid spec");
  }
  for (int r = 0; r < grid.height; ++r) {
    for (int col = 0; col < grid.width; ++col) {
      bev.occupancy_mass[static_cast<std::size_t>(r) * grid.width + col] = {mass.at(r, col, 0), mass.at(r, col, 1),
                                                                             mass.at(r, col, 2)};
    }
  }
  return bev;
}

}  // namespace rtk
