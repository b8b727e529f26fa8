#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bbl/errors.hpp"
#include "bbl/modelspace.hpp"

using namespace bbl;

namespace {

constexpr double kPi = std::numbers::pi;

Point random_point(const ModelSpace& M, std::mt19937_64& rng, double spread = 1.5) {
  std::normal_distribution<double> g(0, spread);
  Point x;
  x.dim = M.ambient_dim();
  if (M.kind() == SpaceKind::euclidean) {
    for (int d = 0; d < x.dim; ++d) x[d] = g(rng);
    return x;
  }
  if (M.kind() == SpaceKind::sphere) {
    for (int d = 0; d < x.dim; ++d) x[d] = g(rng);
    return M.normalize(x);
  }
  // hyperboloid: x0 is slot 0, spatial coordinates drawn freely
  for (int d = 1; d < x.dim; ++d) x[d] = g(rng);
  return M.normalize(x);
}

double minkowski(const Point& x, const Point& y) {
  double v = -x[0] * y[0];
  for (int d = 1; d < x.dim; ++d) v += x[d] * y[d];
  return v;
}

}  // namespace

TEST_CASE("sk reference values") {
  CHECK(sk(0, 7.3) == 1);
  for (double k : {-2.0, -1.0, 0.0, 1.0, 3.0}) CHECK(sk(k, 0) == 1);
  CHECK(sk(1, kPi / 2) == doctest::Approx(2 / kPi).epsilon(1e-15));
  CHECK(sk(-1, 2) == doctest::Approx(std::sinh(2.0) / 2).epsilon(1e-15));
  CHECK_THROWS_AS(sk(1, kPi), DomainError);
}

TEST_CASE("sk second-order Taylor behaviour") {
  for (double k : {-1.0, 0.0, 1.0})
    for (double r : {1e-6, 1e-5, 5e-5, 2e-4, 1e-3, 1e-2}) {
      const double err = std::fabs(sk(k, r) - 1 + k * r * r / 6);
      CHECK(err <= 0.01 * std::pow(r, 4) + 1e-16);
    }
}

TEST_CASE("tau reference values and reductions") {
  CHECK(tau(0.4, -1, 2, 0) == 0.4);
  CHECK(std::isinf(tau(0.5, 1, 2, kPi)));
  CHECK(std::isinf(tau(0.5, 1, 3, 4.0)));
  CHECK(tau(0.5, 1, 2, kPi / 2) == doctest::Approx(std::pow(2.0, -0.75)).epsilon(1e-14));
  for (double th : {0.1, 1.0, 5.0}) CHECK(tau(0.3, 0, 3, th) == 0.3);
  CHECK(tau(0.3, 1, 2, 1e-7) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(tau(0.3, -1, 3, 1e-7) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("tau agrees with the s_k form") {
  for (int n : {2, 3})
    for (double k : {-1.0, -0.5, 1.0, 2.0})
      for (double s : {0.2, 0.5, 0.8})
        for (double th : {0.3, 1.0, 2.0}) {
          if (k * th * th >= kPi * kPi) continue;
          const double want = s * std::pow(sk(k, s * th) / sk(k, th), 1 - 1.0 / n);
          CHECK(tau(s, k, n, th) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("distance reference values") {
  const ModelSpace E = ModelSpace::euclidean(2);
  CHECK(distance(E, E.euclidean_point({0, 0}), E.euclidean_point({3, 4})) == doctest::Approx(5));
  const ModelSpace S = ModelSpace::sphere(2, 1);
  Point n, s;
  n.dim = s.dim = 3;
  n[2] = 1;
  s[2] = -1;
  CHECK(distance(S, n, s) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(is_cut_locus_pair(S, n, s));
  CHECK_THROWS_AS(geodesic_point(S, n, s, 0.5), CutLocusError);

  const ModelSpace H = ModelSpace::hyperbolic(2, -1);
  std::mt19937_64 rng(7);
  for (int it = 0; it < 1000; ++it) {
    const Point x = random_point(H, rng), y = random_point(H, rng);
    const double want = std::acosh(std::max(1.0, -minkowski(x, y)));
    CHECK(distance(H, x, y) == doctest::Approx(want).epsilon(1e-9));
  }
  // small separations: the series d^2 ~ |x - y|_L^2 with no cancellation
  const Point x = H.from_polar(0.7, 0.2);
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    const Point y = H.from_polar(0.7 + eps, 0.2);
    CHECK(distance(H, x, y) == doctest::Approx(eps).epsilon(1e-8));
  }
}

TEST_CASE("mismatched points are rejected") {
  const ModelSpace E = ModelSpace::euclidean(2);
  const ModelSpace S = ModelSpace::sphere(2, 1);
  CHECK_THROWS_AS(distance(S, E.euclidean_point({0, 0}), E.euclidean_point({1, 0})), DomainError);
}

TEST_CASE("geodesic points satisfy both distance conditions") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> w(0, 1);
  for (const ModelSpace& M : {ModelSpace::euclidean(2), ModelSpace::euclidean(3), ModelSpace::sphere(2, 1),
                              ModelSpace::sphere(3, 4), ModelSpace::hyperbolic(2, -1), ModelSpace::hyperbolic(3, -0.5)}) {
    int bad = 0;
    for (int it = 0; it < 10000; ++it) {
      const Point x = random_point(M, rng), y = random_point(M, rng);
      if (is_cut_locus_pair(M, x, y)) continue;
      const double s = w(rng);
      const Point z = geodesic_point(M, x, y, s);
      const double d = distance(M, x, y);
      if (std::fabs(distance(M, x, z) - s * d) > 1e-10 * std::max(1.0, d) ||
          std::fabs(distance(M, z, y) - (1 - s) * d) > 1e-10 * std::max(1.0, d))
        ++bad;
      if (!M.contains(z, 1e-10)) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("geodesic endpoints and euclidean interpolation") {
  const ModelSpace E = ModelSpace::euclidean(2);
  const Point z = geodesic_point(E, E.euclidean_point({0, 0}), E.euclidean_point({2, 4}), 0.25);
  CHECK(z[0] == doctest::Approx(0.5));
  CHECK(z[1] == doctest::Approx(1.0));
  const ModelSpace S = ModelSpace::sphere(2, 1);
  const Point north = S.from_polar(0, 0);
  const Point eq = S.from_polar(kPi / 2, 0);
  const Point m = geodesic_point(S, north, eq, 0.5);
  CHECK(distance(S, north, m) == doctest::Approx(kPi / 4));
  CHECK(distance(S, m, eq) == doctest::Approx(kPi / 4));
  CHECK(geodesic_point(S, north, eq, 0)[2] == doctest::Approx(1));
  CHECK(geodesic_point(S, north, eq, 1)[0] == doctest::Approx(1));
}

TEST_CASE("volume distortion") {
  const ModelSpace E = ModelSpace::euclidean(2);
  CHECK(vol_distortion(E, 0.3, E.euclidean_point({0, 0}), E.euclidean_point({5, 1})) == 1);
  const ModelSpace S = ModelSpace::sphere(2, 1);
  const Point a = S.from_polar(0.4, 0.1);
  CHECK(vol_distortion(S, 0.3, a, a) == 1);
  CHECK(vol_distortion(S, 0.5, S.from_polar(0, 0), S.from_polar(kPi / 2, 0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const ModelSpace S3 = ModelSpace::sphere(3, 1);
  CHECK(vol_distortion_at(S3, 0.5, 1.0) == doctest::Approx(std::pow(std::sin(0.5) / 0.5 / std::sin(1.0), 2)));
  CHECK_THROWS_AS(vol_distortion_at(S, 0.5, kPi), DomainError);
}

TEST_CASE("ball volumes") {
  CHECK(ball_volume(ModelSpace::euclidean(2), 1) == doctest::Approx(kPi));
  CHECK(ball_volume(ModelSpace::sphere(2, 1), kPi / 2) == doctest::Approx(2 * kPi));
  CHECK(ball_volume(ModelSpace::hyperbolic(2, -1), 1) == doctest::Approx(2 * kPi * (std::cosh(1.0) - 1)));
  CHECK(ball_volume(ModelSpace::euclidean(3), 2) == doctest::Approx(4 * kPi / 3 * 8));
  // S^3 of curvature 1: pi (2r - sin 2r)
  CHECK(ball_volume(ModelSpace::sphere(3, 1), 1) == doctest::Approx(kPi * (2 - std::sin(2.0))));
  CHECK(ball_volume(ModelSpace::hyperbolic(3, -1), 1) == doctest::Approx(kPi * (std::sinh(2.0) - 2)));
}

TEST_CASE("model construction rules") {
  CHECK_THROWS(ModelSpace::sphere(2, -1));
  CHECK_THROWS(ModelSpace::hyperbolic(2, 1));
  CHECK_THROWS(ModelSpace::sphere(4, 1));
  const ModelSpace S = ModelSpace::sphere(2, 4);
  CHECK(S.radius() == doctest::Approx(0.5));
  CHECK(S.diameter() == doctest::Approx(kPi / 2));
  Point x = S.from_polar(1.0, 2.0);
  CHECK(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] == doctest::Approx(0.25).epsilon(1e-12));
  const ModelSpace H = ModelSpace::hyperbolic(2, -1);
  Point y = H.from_polar(1.3, 0.4);
  CHECK(minkowski(y, y) == doctest::Approx(-1).epsilon(1e-12));
}
