#include "rtk/render.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "rtk/error.hpp"

namespace rtk {

namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr std::array<Rgb, 8> kPalette = {{{230, 25, 75},
                                          {60, 180, 75},
                                          {255, 225, 25},
                                          {0, 130, 200},
                                          {245, 130, 48},
                                          {145, 30, 180},
                                          {70, 240, 240},
                                          {240, 50, 230}}};

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

void put(Image& img, int row, int col, Rgb c) {
  if (row < 0 || col < 0 || row >= img.height || col >= img.width) return;
  // Channel-wise max keeps overlapping strokes independent of drawing order.
  std::uint8_t* px = img.px(row, col);
  for (int k = 0; k < 3; ++k) px[k] = std::max(px[k], c[static_cast<std::size_t>(k)]);
}

void draw_line(Image& img, Point a, Point b, Rgb c) {
  int x0 = static_cast<int>(std::floor(a.x)), y0 = static_cast<int>(std::floor(a.y));
  const int x1 = static_cast<int>(std::floor(b.x)), y1 = static_cast<int>(std::floor(b.y));
  const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    put(img, y0, x0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

std::vector<Point> drawn_line(const LaneEdge& edge, const EncoderConfig& cfg) {
  try {
    const AnchorLine a = resample_reference_line(edge, cfg);
    std::vector<Point> pts;
    for (std::size_t k = 0; k < a.rows.size(); ++k) pts.push_back({a.xs[k], a.rows[k]});
    return pts;
  } catch (const Error&) {
    return edge.polyline;
  }
}

void field_layer(Image& img, const Raster& f) {
  for (int r = 0; r < std::min(img.height, f.height()); ++r) {
    for (int c = 0; c < std::min(img.width, f.width()); ++c) {
      if (f.channels() == 1) {
        const auto v = to_byte(f.at(r, c));
        put(img, r, c, {v, v, v});
      } else {
        put(img, r, c, {to_byte(f.at(r, c, 0)), to_byte(f.at(r, c, 1)), to_byte(f.at(r, c, 2))});
      }
    }
  }
}

void input_layer(Image& img, const BevGrid& bev) {
  for (int r = 0; r < std::min(img.height, bev.grid.height); ++r) {
    for (int c = 0; c < std::min(img.width, bev.grid.width); ++c) {
      const double road = bev.ground_semantics.at(r, c, 0);
      const double walk = bev.ground_semantics.at(r, c, 1);
      const double terrain = bev.ground_semantics.at(r, c, 2);
      const double mark = bev.ground_markings.at(r, c);
      const double occ = bev.occupancy.at(r, c);
      double red = 0.25 * road + 0.45 * walk + 0.55 * occ;
      double green = 0.25 * road + 0.45 * walk + 0.2 * terrain;
      double blue = 0.3 * road + 0.45 * walk;
      red += 0.45 * mark;
      green += 0.45 * mark;
      blue += 0.45 * mark;
      put(img, r, c, {to_byte(red), to_byte(green), to_byte(blue)});
    }
  }
}

void connections_layer(Image& img, const LaneGraph& g, const EncoderConfig& cfg) {
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].polyline.empty()) continue;
    const auto pts = drawn_line(g.edges[i], cfg);
    // Colour keyed by the endpoint cells so it does not depend on edge order.
    const Cell a = cell_of(g.edges[i].polyline.front(), g.grid.keypoint_cell);
    const Cell b = cell_of(g.edges[i].polyline.back(), g.grid.keypoint_cell);
    const Rgb c = kPalette[static_cast<std::size_t>(a.row * 5 + a.col * 3 + b.row * 7 + b.col) % kPalette.size()];
    if (pts.size() == 1) put(img, static_cast<int>(std::floor(pts[0].y)), static_cast<int>(std::floor(pts[0].x)), c);
    for (std::size_t k = 1; k < pts.size(); ++k) draw_line(img, pts[k - 1], pts[k], c);
  }
}

void keypoints_layer(Image& img, const LaneGraph& g) {
  for (const auto& n : g.nodes) {
    const Rgb c = n.kind == NodeKind::start ? Rgb{0, 255, 0} : n.kind == NodeKind::end ? Rgb{255, 0, 0} : Rgb{255, 255, 0};
    const int r = static_cast<int>(std::floor(n.position.y));
    const int col = static_cast<int>(std::floor(n.position.x));
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) put(img, r + dr, col + dc, c);
    }
  }
}

void add_saturating(Image& into, const Image& layer) {
  for (std::size_t i = 0; i < into.rgb.size(); ++i) {
    into.rgb[i] = static_cast<std::uint8_t>(std::min(255, into.rgb[i] + layer.rgb[i]));
  }
}

}  // namespace

RenderLayers RenderLayers::parse(std::string_view csv) {
  RenderLayers l{false, false, false, false, false, false};
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = std::min(csv.find(',', start), csv.size());
    const std::string_view name = csv.substr(start, end - start);
    if (name == "input") l.input = true;
    else if (name == "R") l.R = true;
    else if (name == "D") l.D = true;
    else if (name == "P") l.P = true;
    else if (name == "keypoints") l.keypoints = true;
    else if (name == "connections") l.connections = true;
    else if (name == "all") l = {true, true, true, true, true, true};
    else if (!name.empty()) throw Error(ErrorCode::InvalidArgument, "unknown layer '" + std::string(name) + "'");
    start = end + 1;
  }
  return l;
}

Image render_layer(const SceneView& view, std::string_view layer, const EncoderConfig& cfg) {
  Image img(view.grid.width, view.grid.height);
  if (layer == "input" && view.input) input_layer(img, *view.input);
  if (layer == "R" && view.fields) field_layer(img, view.fields->R);
  if (layer == "D" && view.fields) field_layer(img, view.fields->D);
  if (layer == "P" && view.fields) field_layer(img, view.fields->P);
  if (layer == "connections" && view.graph) connections_layer(img, *view.graph, cfg);
  if (layer == "keypoints" && view.graph) keypoints_layer(img, *view.graph);
  return img;
}

Image render_scene(const SceneView& view, const RenderLayers& layers, const EncoderConfig& cfg) {
  Image out(view.grid.width, view.grid.height);
  const std::pair<bool, const char*> order[] = {{layers.input, "input"},     {layers.R, "R"},
                                                {layers.D, "D"},             {layers.P, "P"},
                                                {layers.connections, "connections"}, {layers.keypoints, "keypoints"}};
  for (const auto& [on, name] : order) {
    if (on) add_saturating(out, render_layer(view, name, cfg));
  }
  return out;
}

Image side_by_side(const Image& left, const Image& right) {
  Image out(left.width + right.width, std::max(left.height, right.height));
  for (int r = 0; r < left.height; ++r) std::copy_n(left.px(r, 0), left.width * 3, out.px(r, 0));
  for (int r = 0; r < right.height; ++r) std::copy_n(right.px(r, 0), right.width * 3, out.px(r, left.width));
  return out;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

}  // namespace

void write_png(const std::filesystem::path& path, const Image& image) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "PNG encoding failed for " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < image.height; ++r) png_write_row(png, const_cast<png_bytep>(image.px(r, 0)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image read_png(const std::filesystem::path& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    throw Error(ErrorCode::IoError, "cannot read PNG " + path.string());
  }
  img.format = PNG_FORMAT_RGB;
  Image out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (!png_image_finish_read(&img, nullptr, out.rgb.data(), 0, nullptr)) {
    png_image_free(&img);
    throw Error(ErrorCode::IoError, "PNG decoding failed for " + path.string());
  }
  return out;
}

}  // namespace rtk
