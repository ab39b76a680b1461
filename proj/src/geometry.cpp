#include "rtk/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace rtk {

double normalize_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double angdiff(double a, double b) {
  double d = std::fabs(normalize_angle(a) - normalize_angle(b));
  return d > std::numbers::pi ? kTwoPi - d : d;
}

double heading(Point direction) { return normalize_angle(std::atan2(-direction.y, direction.x)); }

Point direction_of(double theta) { return {std::cos(theta), -std::sin(theta)}; }

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return distance(p, a);
  double t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

PolylineProjection project_onto_polyline(std::span<const Point> polyline, Point p) {
  PolylineProjection best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const double d = point_segment_distance(p, polyline[i], polyline[i + 1]);
    if (d < best.distance) best = {d, i};
  }
  return best;
}

double mean_tangent(std::span<const Point> polyline) {
  return heading(polyline.back() - polyline.front());
}

std::optional<double> interp_x_at_row(std::span<const Point> polyline, double row) {
  if (polyline.empty()) return std::nullopt;
  if (row > polyline.front().y || row < polyline.back().y) return std::nullopt;
  // Rows decrease along the polyline; find the first vertex with y <= row.
  auto it = std::partition_point(polyline.begin(), polyline.end(),
                                 [row](const Point& p) { return p.y > row; });
  if (it->y == row) return it->x;
  const Point& lo = *it;          // y < row
  const Point& hi = *(it - 1);    // y > row
  const double t = (hi.y - row) / (hi.y - lo.y);
  return hi.x + t * (lo.x - hi.x);
}

bool strictly_row_decreasing(std::span<const Point> polyline) {
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    if (!(polyline[i + 1].y < polyline[i].y)) return false;
  }
  return true;
}

namespace {

bool any_vertex_within(std::span<const Point> from, std::span<const Point> to, double threshold) {
  for (const Point& p : from) {
    if (project_onto_polyline(to, p).distance <= threshold) return true;
  }
  return false;
}

}  // namespace

bool polylines_within(std::span<const Point> a, std::span<const Point> b, double threshold) {
  if (a.size() < 2 || b.size() < 2) return false;
  auto bbox = [](std::span<const Point> pl) {
    auto [minx, maxx] = std::minmax_element(pl.begin(), pl.end(),
                                            [](auto& l, auto& r) { return l.x < r.x; });
    auto [miny, maxy] = std::minmax_element(pl.begin(), pl.end(),
                                            [](auto& l, auto& r) { return l.y < r.y; });
    return std::array<double, 4>{minx->x, maxx->x, miny->y, maxy->y};
  };
  const auto ba = bbox(a);
  const auto bb = bbox(b);
  if (ba[0] > bb[1] + threshold || bb[0] > ba[1] + threshold || ba[2] > bb[3] + threshold ||
      bb[2] > ba[3] + threshold) {
    return false;
  }
  return any_vertex_within(a, b, threshold) || any_vertex_within(b, a, threshold);
}

}  // namespace rtk
