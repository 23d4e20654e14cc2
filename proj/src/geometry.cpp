#include "solarmap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "solarmap/error.hpp"

namespace solarmap {

namespace {

double cross(Point o, Point a, Point b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(Point a, Point b) noexcept { return std::hypot(b.x - a.x, b.y - a.y); }

double relative_mismatch(double a, double b) noexcept {
  const double scale = std::max(a, b);
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

}  // namespace

void sin_cos_deg(double degrees, double& s, double& c) noexcept {
  double r = std::fmod(degrees, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 0.0) {
    s = 0.0, c = 1.0;
  } else if (r == 90.0) {
    s = 1.0, c = 0.0;
  } else if (r == 180.0) {
    s = 0.0, c = -1.0;
  } else if (r == 270.0) {
    s = -1.0, c = 0.0;
  } else {
    const double rad = r * std::numbers::pi / 180.0;
    s = std::sin(rad);
    c = std::cos(rad);
  }
}

double wrap_half_turn(double degrees) noexcept {
  double t = std::fmod(degrees, 180.0);
  if (t <= -90.0) t += 180.0;
  if (t > 90.0) t -= 180.0;
  return t;
}

RotatedBox canonicalize(double cx, double cy, double w, double h, double theta) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) || !std::isfinite(h) ||
      !std::isfinite(theta)) {
    throw Error(ErrorCode::InvalidBox, "box has a non-finite field");
  }
  if (w <= 0.0 || h <= 0.0) {
    std::ostringstream msg;
    msg << "box dimensions must be positive (w=" << w << ", h=" << h << ")";
    throw Error(ErrorCode::InvalidBox, msg.str());
  }
  if (w > h) {
    std::swap(w, h);
    theta += 90.0;
  }
  return RotatedBox{cx, cy, w, h, wrap_half_turn(theta)};
}

RotatedBox canonicalize(const RotatedBox& box) {
  return canonicalize(box.cx, box.cy, box.w, box.h, box.theta);
}

bool is_canonical(const RotatedBox& box) noexcept {
  return std::isfinite(box.cx) && std::isfinite(box.cy) && std::isfinite(box.theta) &&
         std::isfinite(box.h) && box.w > 0.0 && box.w <= box.h && box.theta > -90.0 &&
         box.theta <= 90.0;
}

Quad to_vertices(const RotatedBox& box) noexcept {
  double s, c;
  sin_cos_deg(box.theta, s, c);
  const double hw = box.w / 2.0;
  const double hh = box.h / 2.0;
  constexpr std::array<std::array<double, 2>, 4> signs{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  Quad q;
  for (std::size_t i = 0; i < 4; ++i) {
    const double ox = signs[i][0] * hw;
    const double oy = signs[i][1] * hh;
    q.v[i] = Point{box.cx + c * ox - s * oy, box.cy + s * ox + c * oy};
  }
  return q;
}

RotatedBox from_vertices(const Quad& quad) {
  const auto& v = quad.v;
  const double s0 = distance(v[0], v[1]);
  const double s1 = distance(v[1], v[2]);
  const double s2 = distance(v[2], v[3]);
  const double s3 = distance(v[3], v[0]);

  double deviation = std::max({relative_mismatch(s0, s2), relative_mismatch(s1, s3),
                               relative_mismatch(distance(v[0], v[2]), distance(v[1], v[3]))});
  if (std::min({s0, s1, s2, s3}) <= 0.0) {
    deviation = 1.0;
  } else {
    // Corner angles: catches crossed quads whose sides and "diagonals" match.
    for (std::size_t i = 0; i < 4; ++i) {
      const Point& prev = v[(i + 3) % 4];
      const Point& cur = v[i];
      const Point& next = v[(i + 1) % 4];
      const double dot = (prev.x - cur.x) * (next.x - cur.x) + (prev.y - cur.y) * (next.y - cur.y);
      deviation = std::max(deviation, std::abs(dot) / (distance(prev, cur) * distance(cur, next)));
    }
  }
  if (!(deviation <= kRectangleTolerance)) {
    std::ostringstream msg;
    msg << "quad is not a rectangle (relative deviation " << deviation << ")";
    throw NotARectangleError(deviation, msg.str());
  }

  const double cx = (v[0].x + v[1].x + v[2].x + v[3].x) / 4.0;
  const double cy = (v[0].y + v[1].y + v[2].y + v[3].y) / 4.0;
  // Direction of the w side, averaged over both edges that carry it.
  const double dx = (v[1].x - v[0].x) + (v[2].x - v[3].x);
  const double dy = (v[1].y - v[0].y) + (v[2].y - v[3].y);
  const double theta = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
  return canonicalize(cx, cy, (s0 + s2) / 2.0, (s1 + s3) / 2.0, theta);
}

AxisAlignedBounds bounds(const RotatedBox& box) noexcept {
  double s, c;
  sin_cos_deg(box.theta, s, c);
  const double ex = (std::abs(c) * box.w + std::abs(s) * box.h) / 2.0;
  const double ey = (std::abs(s) * box.w + std::abs(c) * box.h) / 2.0;
  return {box.cx - ex, box.cy - ey, box.cx + ex, box.cy + ey};
}

double signed_area(std::span<const Point> polygon) noexcept {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  // Relative to the first vertex; world coordinates can be ~1e6 away from 0.
  const Point o = polygon[0];
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[i + 1];
    twice += (a.x - o.x) * (b.y - o.y) - (b.x - o.x) * (a.y - o.y);
  }
  return twice / 2.0;
}

std::vector<Point> clip_convex(std::span<const Point> subject, std::span<const Point> clip) {
  std::vector<Point> output(subject.begin(), subject.end());
  std::vector<Point> input;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Point a = clip[e];
    const Point b = clip[(e + 1) % m];
    input.swap(output);
    output.clear();
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& prev = input[(i + n - 1) % n];
      const Point& cur = input[i];
      const double dp = cross(a, b, prev);
      const double dc = cross(a, b, cur);
      if (dc >= 0.0) {
        if (dp < 0.0) {
          const double t = dp / (dp - dc);
          output.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
        }
        output.push_back(cur);
      } else if (dp >= 0.0) {
        const double t = dp / (dp - dc);
        output.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
      }
    }
  }
  return output;
}

double intersection_area(const RotatedBox& a, const RotatedBox& b) {
  const auto ba = bounds(a);
  const auto bb = bounds(b);
  if (ba.max_x <= bb.min_x || bb.max_x <= ba.min_x || ba.max_y <= bb.min_y ||
      bb.max_y <= ba.min_y) {
    return 0.0;
  }
  // Clip in a frame centred on `a` to limit cancellation at large offsets.
  const Quad qa = to_vertices(translate_box(a, -a.cx, -a.cy));
  const Quad qb = to_vertices(translate_box(b, -a.cx, -a.cy));
  const auto poly = clip_convex(qa.v, qb.v);
  return std::abs(signed_area(poly));
}

double rotated_iou(const RotatedBox& a, const RotatedBox& b) {
  const double area_a = a.area();
  const double area_b = b.area();
  if (area_a < kMinArea || area_b < kMinArea) return 0.0;
  const double inter = intersection_area(a, b);
  if (inter < kMinArea) return 0.0;
  const double uni = area_a + area_b - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Point rotate_point(Point p, double degrees, Point center) noexcept {
  double s, c;
  sin_cos_deg(degrees, s, c);
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return {center.x + c * dx - s * dy, center.y + s * dx + c * dy};
}

RotatedBox rotate_box(const RotatedBox& box, double degrees, Point center) {
  const Point p = rotate_point({box.cx, box.cy}, degrees, center);
  return canonicalize(p.x, p.y, box.w, box.h, box.theta + degrees);
}

RotatedBox translate_box(const RotatedBox& box, double dx, double dy) noexcept {
  RotatedBox out = box;
  out.cx += dx;
  out.cy += dy;
  return out;
}

bool contains(const RotatedBox& box, Point p) noexcept {
  double s, c;
  sin_cos_deg(box.theta, s, c);
  const double dx = p.x - box.cx;
  const double dy = p.y - box.cy;
  const double lx = c * dx + s * dy;
  const double ly = -s * dx + c * dy;
  return std::abs(lx) <= box.w / 2.0 && std::abs(ly) <= box.h / 2.0;
}

}  // namespace solarmap
