#include "bbl/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// index of the lowest (then leftmost) vertex
std::size_t bottom_vertex(const Polygon& P) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < P.v.size(); ++i) {
    const auto& a = P.v[i];
    const auto& b = P.v[k];
    if (a[1] < b[1] || (a[1] == b[1] && a[0] < b[0])) k = i;
  }
  return k;
}

}  // namespace

double signed_area(const Polygon& P) {
  const std::size_t m = P.v.size();
  if (m < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = P.v[i];
    const auto& b = P.v[(i + 1) % m];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * s;
}

double area(const Polygon& P) { return std::fabs(signed_area(P)); }

Vec2 centroid(const Polygon& P) {
  const std::size_t m = P.v.size();
  double cx = 0, cy = 0, a2 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = P.v[i];
    const auto& b = P.v[(i + 1) % m];
    const double w = a[0] * b[1] - a[1] * b[0];
    a2 += w;
    cx += (a[0] + b[0]) * w;
    cy += (a[1] + b[1]) * w;
  }
  if (a2 == 0) throw DomainError("degenerate polygon has no centroid");
  return {cx / (3 * a2), cy / (3 * a2)};
}

bool is_convex(const Polygon& P, double tol) {
  const std::size_t m = P.v.size();
  if (m < 3) return false;
  double scale = 0;
  for (const auto& p : P.v) scale = std::max({scale, std::fabs(p[0]), std::fabs(p[1])});
  const double eps = tol * std::max(1.0, scale * scale);
  for (std::size_t i = 0; i < m; ++i)
    if (cross(P.v[i], P.v[(i + 1) % m], P.v[(i + 2) % m]) < -eps) return false;
  return signed_area(P) > 0;
}

bool contains(const Polygon& P, const Vec2& x) {
  const std::size_t m = P.v.size();
  bool inside = false;
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    const auto& a = P.v[i];
    const auto& b = P.v[j];
    // boundary
    const double cr = cross(a, b, x);
    if (std::fabs(cr) <= 1e-14 * (1 + std::fabs(a[0]) + std::fabs(a[1])) &&
        std::min(a[0], b[0]) - 1e-14 <= x[0] && x[0] <= std::max(a[0], b[0]) + 1e-14 &&
        std::min(a[1], b[1]) - 1e-14 <= x[1] && x[1] <= std::max(a[1], b[1]) + 1e-14)
      return true;
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      const double xi = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x[0] < xi) inside = !inside;
    }
  }
  return inside;
}

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Polygon H;
  if (pts.size() < 3) {
    H.v = pts;
    return H;
  }
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const auto& p = pts[i];
    while (k >= t && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  H.v = std::move(h);
  return H;
}

Polygon affine(const Polygon& P, double scale, const Vec2& shift) {
  Polygon Q = P;
  for (auto& p : Q.v) p = {scale * p[0] + shift[0], scale * p[1] + shift[1]};
  return Q;
}

Polygon reversed_if_clockwise(Polygon P) {
  if (signed_area(P) < 0) std::reverse(P.v.begin(), P.v.end());
  return P;
}

Polygon minkowski_combination(const Polygon& A0, const Polygon& B0, double s) {
  if (!(s >= 0 && s <= 1)) throw DomainError("interpolation weight must lie in [0,1]");
  if (!is_convex(A0, 1e-9) || !is_convex(B0, 1e-9))
    throw DomainError("Minkowski interpolation needs convex polygons");
  const Polygon A = affine(A0, 1.0 - s, {0, 0});
  const Polygon B = affine(B0, s, {0, 0});
  const std::size_t na = A.v.size(), nb = B.v.size();
  const std::size_t ia0 = bottom_vertex(A), ib0 = bottom_vertex(B);
  Polygon C;
  C.v.reserve(na + nb);
  std::size_t i = 0, j = 0;
  while (i < na || j < nb) {
    const Vec2& a = A.v[(ia0 + i) % na];
    const Vec2& b = B.v[(ib0 + j) % nb];
    C.v.push_back({a[0] + b[0], a[1] + b[1]});
    const Vec2& a1 = A.v[(ia0 + i + 1) % na];
    const Vec2& b1 = B.v[(ib0 + j + 1) % nb];
    const Vec2 ea{a1[0] - a[0], a1[1] - a[1]};
    const Vec2 eb{b1[0] - b[0], b1[1] - b[1]};
    const double cr = ea[0] * eb[1] - ea[1] * eb[0];
    if (j >= nb || (i < na && cr > 0)) {
      ++i;
    } else if (i >= na || cr < 0) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  // drop collinear vertices produced by parallel edges
  Polygon out;
  const std::size_t m = C.v.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2& prev = C.v[(k + m - 1) % m];
    const Vec2& cur = C.v[k];
    const Vec2& next = C.v[(k + 1) % m];
    const double cr = cross(prev, cur, next);
    const double scale = std::hypot(cur[0] - prev[0], cur[1] - prev[1]) *
                         std::hypot(next[0] - cur[0], next[1] - cur[1]);
    if (std::fabs(cr) > 1e-13 * scale) out.v.push_back(cur);
  }
  return out;
}

Polygon regular_polygon(const Vec2& c, double r, int m, double phase) {
  Polygon P;
  for (int i = 0; i < m; ++i) {
    const double t = phase + 2 * std::numbers::pi * i / m;
    P.v.push_back({c[0] + r * std::cos(t), c[1] + r * std::sin(t)});
  }
  return P;
}

Polygon box_polygon(double x0, double y0, double x1, double y1) {
  return Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

}  // namespace bbl
