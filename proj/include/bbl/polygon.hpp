#pragma once

#include <array>
#include <vector>

namespace bbl {

using Vec2 = std::array<double, 2>;

// Closed vertex sequence, counterclockwise; the last vertex is not repeated.
struct Polygon {
  std::vector<Vec2> v;
};

double signed_area(const Polygon& P);
double area(const Polygon& P);
Vec2 centroid(const Polygon& P);
bool is_convex(const Polygon& P, double tol = 1e-12);
bool contains(const Polygon& P, const Vec2& x);  // even-odd rule; boundary counts as inside
Polygon convex_hull(std::vector<Vec2> pts);       // Andrew's monotone chain, collinear points dropped
Polygon affine(const Polygon& P, double scale, const Vec2& shift);
Polygon reversed_if_clockwise(Polygon P);
// (1-s)A + sB for convex polygons by merging edge directions
Polygon minkowski_combination(const Polygon& A, const Polygon& B, double s);
Polygon regular_polygon(const Vec2& center, double radius, int m, double phase = 0.0);
Polygon box_polygon(double x0, double y0, double x1, double y1);

}  // namespace bbl
