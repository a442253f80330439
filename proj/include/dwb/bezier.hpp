#pragma once

#include <utility>
#include <vector>

namespace dwb::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) = default;
};

double distance(Point a, Point b);
double distance_to_segment(Point p, Point a, Point b);
Point lerp(Point a, Point b, double t);

struct CubicBezier {
  Point p0, p1, p2, p3;

  friend bool operator==(const CubicBezier&, const CubicBezier&) = default;

  /// Straight chord expressed as a cubic: anchors at 1/3 and 2/3.
  static CubicBezier line(Point from, Point to);
};

inline constexpr double kDefaultFlattenTolerance = 0.25;

/// Bernstein form; t must lie in [0, 1].
Point evaluate(const CubicBezier& curve, double t);

/// de Casteljau subdivision at 0 < t < 1.
std::pair<CubicBezier, CubicBezier> split(const CubicBezier& curve, double t);

struct Polyline {
  std::vector<Point> points;
  std::vector<double> params;  // curve parameter of each vertex
};

/// Recursive subdivision until both inner control points lie within
/// `tolerance` of their chord segment. First/last vertices are P0/P3.
Polyline flatten(const CubicBezier& curve, double tolerance = kDefaultFlattenTolerance);

struct HitResult {
  bool hit = false;
  double distance = 0.0;
};

/// Distance from `point` to the flattened curve, with a bounding-box reject.
HitResult hit_test(const CubicBezier& curve, Point point, double threshold,
                   double tolerance = kDefaultFlattenTolerance);

struct Box {
  Point min;
  Point max;
};

/// Box of the control polygon, which contains the curve.
Box control_bounds(const CubicBezier& curve);

}  // namespace dwb::geometry
