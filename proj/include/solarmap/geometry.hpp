#pragma once

#include <array>
#include <span>
#include <vector>

namespace solarmap {

// Pixel coordinates are continuous, with integer values at pixel centers
// (the world-file convention). Angles are degrees, counter-clockwise in a
// y-up frame; on a y-down raster the same numbers read clockwise.

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Oriented rectangle (cx, cy, w, h, theta). A value obtained from
/// canonicalize() satisfies 0 < w <= h and theta in (-90, 90].
struct RotatedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double theta = 0.0;

  double area() const noexcept { return w * h; }

  friend bool operator==(const RotatedBox&, const RotatedBox&) = default;
};

/// Four vertices, counter-clockwise.
struct Quad {
  std::array<Point, 4> v;
};

struct AxisAlignedBounds {
  double min_x, min_y, max_x, max_y;
};

/// Relative tolerance used by from_vertices to accept a quad as a rectangle.
inline constexpr double kRectangleTolerance = 1e-4;
/// Boxes (or intersections) with smaller area count as empty in IoU.
inline constexpr double kMinArea = 1e-12;

/// sin/cos of an angle in degrees; exact at multiples of 90.
void sin_cos_deg(double degrees, double& s, double& c) noexcept;

/// Wraps any finite angle into (-90, 90].
double wrap_half_turn(double degrees) noexcept;

/// Throws Error(InvalidBox) on non-positive or non-finite input.
RotatedBox canonicalize(double cx, double cy, double w, double h, double theta);
RotatedBox canonicalize(const RotatedBox& box);

bool is_canonical(const RotatedBox& box) noexcept;

/// Corners are center + R(theta) * offset for offsets
/// (-w/2,-h/2), (w/2,-h/2), (w/2,h/2), (-w/2,h/2), in that order.
Quad to_vertices(const RotatedBox& box) noexcept;

/// Inverse of to_vertices. Throws NotARectangleError when opposite sides or
/// the diagonals differ by more than kRectangleTolerance (relative).
RotatedBox from_vertices(const Quad& quad);

AxisAlignedBounds bounds(const RotatedBox& box) noexcept;

/// Signed shoelace area; positive for counter-clockwise rings.
double signed_area(std::span<const Point> polygon) noexcept;

/// Clips the convex polygon `subject` against every edge of the convex,
/// counter-clockwise polygon `clip` (Sutherland-Hodgman).
std::vector<Point> clip_convex(std::span<const Point> subject,
                               std::span<const Point> clip);

double intersection_area(const RotatedBox& a, const RotatedBox& b);

/// Exact area(a & b) / area(a | b) in [0, 1].
double rotated_iou(const RotatedBox& a, const RotatedBox& b);

Point rotate_point(Point p, double degrees, Point center) noexcept;

/// Rigid rotation of the box about `center`; the result is canonical.
RotatedBox rotate_box(const RotatedBox& box, double degrees, Point center);

RotatedBox translate_box(const RotatedBox& box, double dx, double dy) noexcept;

bool contains(const RotatedBox& box, Point p) noexcept;

}  // namespace solarmap
