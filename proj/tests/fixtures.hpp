#pragma once

// Seeded fixture generators shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "bbl/bbl.hpp"
#include "bbl/polygon.hpp"

namespace fixtures {

using bbl::GridDensity;
using bbl::GridPtr;
using bbl::Point;

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Concave profile on a random interval of [0.05, 0.95]: constant, tent or parabola.
inline GridDensity concave_profile_1d(std::mt19937_64& rng, const GridPtr& grid) {
  const double len = uniform(rng, 0.2, 0.6);
  const double l = uniform(rng, 0.05, 0.95 - len), r = l + len;
  const double amp = std::exp(uniform(rng, std::log(0.2), std::log(5.0)));
  const double base = uniform(rng, 0.05, 1.0);
  const int kind = pick(rng, 0, 2);
  return bbl::sample(grid, [=](const Point& x) {
    const double t = x[0];
    if (t < l || t > r) return 0.0;
    const double u = (t - l) / len;
    switch (kind) {
      case 0: return amp;
      case 1: return amp * (base + std::min(u, 1 - u));
      default: return amp * (base + u * (1 - u));
    }
  });
}

// Concave cap or truncated Gaussian on a random box or disc inside [0.05, 0.95]^2.
inline GridDensity profile_2d(std::mt19937_64& rng, const GridPtr& grid) {
  const bool disk = pick(rng, 0, 1) == 1;
  const double cx = uniform(rng, 0.3, 0.7), cy = uniform(rng, 0.3, 0.7);
  const double wx = uniform(rng, 0.1, 0.25), wy = disk ? wx : uniform(rng, 0.1, 0.25);
  const double amp = std::exp(uniform(rng, std::log(0.3), std::log(3.0)));
  const bool gauss = pick(rng, 0, 1) == 1;
  const double sigma = uniform(rng, 0.1, 0.3);
  return bbl::sample(grid, [=](const Point& x) {
    const double dx = (x[0] - cx) / wx, dy = (x[1] - cy) / wy;
    const bool inside = disk ? dx * dx + dy * dy <= 1 : std::fabs(dx) <= 1 && std::fabs(dy) <= 1;
    if (!inside) return 0.0;
    const double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
    if (gauss) return amp * std::exp(-r2 / (2 * sigma * sigma));
    return amp * (1.2 - 0.5 * (dx * dx + dy * dy) / 2);
  });
}

// Convex hull of 3 to 12 random points in a random box.
inline bbl::Polygon random_convex_polygon(std::mt19937_64& rng) {
  const double cx = uniform(rng, -2, 2), cy = uniform(rng, -2, 2);
  const double sx = std::exp(uniform(rng, std::log(0.1), std::log(3.0)));
  const double sy = std::exp(uniform(rng, std::log(0.1), std::log(3.0)));
  while (true) {
    std::vector<bbl::Vec2> pts;
    const int k = pick(rng, 3, 12);
    for (int i = 0; i < k; ++i) pts.push_back({cx + sx * uniform(rng, -1, 1), cy + sy * uniform(rng, -1, 1)});
    bbl::Polygon P = bbl::convex_hull(pts);
    if (P.v.size() >= 3 && bbl::area(P) > 1e-3 * sx * sy) return P;
  }
}

}  // namespace fixtures
