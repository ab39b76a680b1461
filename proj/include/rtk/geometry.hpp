#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace rtk {

/// Continuous pixel coordinates: x = column, y = row. Pixel (r, c) covers
/// [c, c+1) x [r, r+1) and has its center at (c + 0.5, r + 0.5).
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

inline Point pixel_center(int row, int col) { return {col + 0.5, row + 0.5}; }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
double normalize_angle(double theta);

/// Smallest absolute difference between two angles, in [0, pi].
double angdiff(double a, double b);

/// Heading of the direction vector (dx, dy) given in image axes. Angles are
/// measured with 0 = +x (right) and counter-clockwise positive as seen on
/// screen, so "up" (decreasing row) is pi/2.
double heading(Point direction);

/// Unit direction vector in image axes for a heading (inverse of heading()).
Point direction_of(double theta);

double point_segment_distance(Point p, Point a, Point b);

struct PolylineProjection {
  double distance = 0.0;
  std::size_t segment = 0;  // index of the segment holding the nearest point
};

/// Nearest point of a polyline (>= 2 points) to p. Ties keep the earliest segment.
PolylineProjection project_onto_polyline(std::span<const Point> polyline, Point p);

/// Direction of the chord from the first to the last point, which is the
/// length-weighted mean of the segment tangents.
double mean_tangent(std::span<const Point> polyline);

/// Piecewise-linear x at a given row for a polyline whose rows strictly
/// decrease. Returns the vertex x exactly when the row hits a vertex and
/// nullopt outside [last.y, first.y].
std::optional<double> interp_x_at_row(std::span<const Point> polyline, double row);

bool strictly_row_decreasing(std::span<const Point> polyline);

/// True when some vertex of either polyline lies within `threshold` of the other.
bool polylines_within(std::span<const Point> a, std::span<const Point> b, double threshold);

}  // namespace rtk
