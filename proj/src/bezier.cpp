#include "dwb/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dwb/error.hpp"

namespace dwb::geometry {

namespace {

constexpr int kMaxDepth = 24;

void check_tolerance(double tolerance) {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  }
}

bool flat_enough(const CubicBezier& c, double tolerance) {
  return distance_to_segment(c.p1, c.p0, c.p3) < tolerance &&
         distance_to_segment(c.p2, c.p0, c.p3) < tolerance;
}

void subdivide(const CubicBezier& c, double t0, double t1, double tolerance, int depth, Polyline& out) {
  if (depth >= kMaxDepth || flat_enough(c, tolerance)) {
    out.points.push_back(c.p3);
    out.params.push_back(t1);
    return;
  }
  const auto [left, right] = split(c, 0.5);
  const double mid = 0.5 * (t0 + t1);
  subdivide(left, t0, mid, tolerance, depth + 1, out);
  subdivide(right, mid, t1, tolerance, depth + 1, out);
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance_to_segment(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return distance(p, a);
  const Point ap = p - a;
  const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

Point lerp(Point a, Point b, double t) { return a + t * (b - a); }

CubicBezier CubicBezier::line(Point from, Point to) {
  return {from, from + (1.0 / 3.0) * (to - from), from + (2.0 / 3.0) * (to - from), to};
}

Point evaluate(const CubicBezier& c, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "t must lie in [0, 1]");
  const double u = 1.0 - t;
  const double b0 = u * u * u;
  const double b1 = 3.0 * u * u * t;
  const double b2 = 3.0 * u * t * t;
  const double b3 = t * t * t;
  return {b0 * c.p0.x + b1 * c.p1.x + b2 * c.p2.x + b3 * c.p3.x,
          b0 * c.p0.y + b1 * c.p1.y + b2 * c.p2.y + b3 * c.p3.y};
}

std::pair<CubicBezier, CubicBezier> split(const CubicBezier& c, double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "split needs 0 < t < 1");
  const Point a = lerp(c.p0, c.p1, t);
  const Point b = lerp(c.p1, c.p2, t);
  const Point d = lerp(c.p2, c.p3, t);
  const Point ab = lerp(a, b, t);
  const Point bd = lerp(b, d, t);
  const Point mid = lerp(ab, bd, t);
  return {CubicBezier{c.p0, a, ab, mid}, CubicBezier{mid, bd, d, c.p3}};
}

Polyline flatten(const CubicBezier& curve, double tolerance) {
  check_tolerance(tolerance);
  Polyline out;
  out.points.push_back(curve.p0);
  out.params.push_back(0.0);
  subdivide(curve, 0.0, 1.0, tolerance, 0, out);
  out.points.back() = curve.p3;
  return out;
}

Box control_bounds(const CubicBezier& c) {
  Box box{c.p0, c.p0};
  for (Point p : {c.p1, c.p2, c.p3}) {
    box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y)};
    box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y)};
  }
  return box;
}

HitResult hit_test(const CubicBezier& curve, Point point, double threshold, double tolerance) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  const Box box = control_bounds(curve);
  const bool outside = point.x < box.min.x - threshold || point.x > box.max.x + threshold ||
                       point.y < box.min.y - threshold || point.y > box.max.y + threshold;
  const Polyline line = flatten(curve, tolerance);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    best = std::min(best, distance_to_segment(point, line.points[i], line.points[i + 1]));
  }
  if (line.points.size() == 1) best = distance(point, line.points.front());
  return {!outside && best <= threshold, best};
}

}  // namespace dwb::geometry
