#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bbl/errors.hpp"
#include "bbl/modelspace.hpp"
#include "bbl/ot.hpp"
#include "bbl/sets.hpp"
#include "fixtures.hpp"

using namespace bbl;

namespace {

std::vector<Point> random_points(std::mt19937_64& rng, const ModelSpace& E, int k, double lo, double hi) {
  std::vector<Point> pts;
  for (int i = 0; i < k; ++i)
    pts.push_back(E.euclidean_point({fixtures::uniform(rng, lo, hi), fixtures::uniform(rng, lo, hi)}));
  return pts;
}

double sq(const ModelSpace& M, const Point& x, const Point& y) {
  const double d = distance(M, x, y);
  return d * d;
}

// brute-force minimum over all permutation couplings of equal-mass clouds
double best_permutation_cost(const ModelSpace& M, const std::vector<Point>& x, const std::vector<Point>& y) {
  std::vector<int> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0;
    for (std::size_t i = 0; i < x.size(); ++i) c += sq(M, x[i], y[perm[i]]) / 2;
    best = std::min(best, c / x.size());
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("exact solver small cases") {
  const ModelSpace E = ModelSpace::euclidean(2);
  std::mt19937_64 rng(1);
  const WeightedCloud mu = uniform_cloud(E, random_points(rng, E, 5, 0, 1));
  const TransportPlan same = solve_exact(mu, mu);
  CHECK(same.cost == 0);
  CHECK(same.couplings.size() == 5);
  for (const auto& c : same.couplings) CHECK(c.i == c.j);

  const WeightedCloud one = uniform_cloud(E, {E.euclidean_point({0.5, 0.5})});
  const TransportPlan star = solve_exact(one, mu);
  CHECK(star.couplings.size() == 5);
  CHECK(star.marginal_violation() <= 1e-12);
  double want = 0;
  for (const auto& y : mu.points) want += sq(E, one.points[0], y) / 2 / 5;
  CHECK(star.cost == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("exact solver matches the permutation oracle") {
  const ModelSpace E = ModelSpace::euclidean(2);
  std::mt19937_64 rng(2);
  for (int it = 0; it < 200; ++it) {
    const int k = fixtures::pick(rng, 2, 6);
    const auto x = random_points(rng, E, k, 0, 1), y = random_points(rng, E, k, -0.5, 1.5);
    const TransportPlan P = solve_exact(uniform_cloud(E, x), uniform_cloud(E, y));
    CHECK(P.cost == doctest::Approx(best_permutation_cost(E, x, y)).epsilon(1e-10));
    CHECK(P.marginal_violation() <= 1e-9);
    CHECK(std::fabs(P.cost - P.recomputed_cost()) <= 1e-12);
  }
}

TEST_CASE("exact solver on the sphere matches the permutation oracle") {
  const ModelSpace S = ModelSpace::sphere(2, 1);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    std::vector<Point> x, y;
    for (int i = 0; i < 4; ++i) {
      x.push_back(S.from_polar(fixtures::uniform(rng, 0.2, 1.2), fixtures::uniform(rng, 0, 6.28)));
      y.push_back(S.from_polar(fixtures::uniform(rng, 0.2, 1.2), fixtures::uniform(rng, 0, 6.28)));
    }
    const TransportPlan P = solve_exact(uniform_cloud(S, x), uniform_cloud(S, y));
    CHECK(P.cost == doctest::Approx(best_permutation_cost(S, x, y)).epsilon(1e-10));
  }
}

TEST_CASE("cyclical monotonicity of exact plans") {
  const ModelSpace E = ModelSpace::euclidean(2);
  std::mt19937_64 rng(4);
  WeightedCloud mu{E, random_points(rng, E, 30, 0, 1), {}}, nu{E, random_points(rng, E, 25, 1, 2), {}};
  for (int i = 0; i < 30; ++i) mu.masses.push_back(fixtures::uniform(rng, 0.5, 2));
  for (int i = 0; i < 25; ++i) nu.masses.push_back(fixtures::uniform(rng, 0.5, 2));
  const TransportPlan P = solve_exact(normalized(mu), normalized(nu));
  CHECK(P.marginal_violation() <= 1e-9);
  for (const auto& c : P.couplings) CHECK(c.mass > 0);
  for (const auto& a : P.couplings)
    for (const auto& b : P.couplings) {
      const double lhs = sq(E, mu.points[a.i], nu.points[a.j]) + sq(E, mu.points[b.i], nu.points[b.j]);
      const double rhs = sq(E, mu.points[a.i], nu.points[b.j]) + sq(E, mu.points[b.i], nu.points[a.j]);
      CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("exact solver is deterministic and capped") {
  const ModelSpace E = ModelSpace::euclidean(2);
  std::vector<Point> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) grid.push_back(E.euclidean_point({double(i), double(j)}));
  const WeightedCloud mu = uniform_cloud(E, grid);
  std::vector<Point> shifted = grid;
  for (auto& p : shifted) p[0] += 1;
  const TransportPlan a = solve_exact(mu, uniform_cloud(E, shifted));
  const TransportPlan b = solve_exact(mu, uniform_cloud(E, shifted));
  REQUIRE(a.couplings.size() == b.couplings.size());
  for (std::size_t k = 0; k < a.couplings.size(); ++k) {
    CHECK(a.couplings[k].i == b.couplings[k].i);
    CHECK(a.couplings[k].j == b.couplings[k].j);
    CHECK(a.couplings[k].mass == b.couplings[k].mass);
  }
  CHECK(a.cost == doctest::Approx(0.5));
  std::vector<Point> big(1001, E.origin());
  CHECK_THROWS_AS(solve_exact(uniform_cloud(E, big), uniform_cloud(E, big)), DomainError);
}

TEST_CASE("entropic solver") {
  const ModelSpace E = ModelSpace::euclidean(1);
  std::mt19937_64 rng(5);
  std::vector<Point> x, y;
  for (int i = 0; i < 64; ++i) {
    x.push_back(E.euclidean_point({fixtures::uniform(rng, 0, 1)}));
    y.push_back(E.euclidean_point({fixtures::uniform(rng, 0.3, 1.6)}));
  }
  const WeightedCloud mu = uniform_cloud(E, x), nu = uniform_cloud(E, y);
  const double exact = solve_exact(mu, nu).cost;

  SinkhornOptions opt;
  opt.epsilon = 1e-3;
  const EntropicResult same = solve_entropic(mu, mu, opt);
  CHECK(same.report.converged);
  CHECK(same.plan.cost <= 1e-3);

  const EntropicResult r = solve_entropic(mu, nu, opt);
  CHECK(r.report.converged);
  CHECK(r.plan.marginal_violation() <= 1e-8);
  CHECK(std::fabs(r.plan.cost - exact) <= 0.01 * exact);

  double prev = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    opt.epsilon = eps;
    const double c = solve_entropic(mu, nu, opt).plan.cost;
    CHECK(c < prev);
    CHECK(c >= exact - 1e-9);
    prev = c;
  }

  opt.epsilon = 1e4;
  opt.scaling = false;
  const EntropicResult flat = solve_entropic(mu, nu, opt);
  double product = 0;
  for (const auto& a : x)
    for (const auto& b : y) product += sq(E, a, b) / 2 / (64.0 * 64.0);
  CHECK(flat.plan.cost == doctest::Approx(product).epsilon(1e-3));

  opt.epsilon = 1e-4;
  opt.max_iter = 3;
  const EntropicResult cut = solve_entropic(mu, nu, opt);
  CHECK_FALSE(cut.report.converged);
  CHECK(cut.report.marginal_violation > 0);
  CHECK_THROWS_AS(solve_entropic(mu, nu, SinkhornOptions{-1.0}), DomainError);
}

TEST_CASE("grid entropic solver agrees with the dense one") {
  const GridPtr G = Grid::euclidean(2, {0, 0, 0}, 1.0 / 12, {12, 12, 1});
  std::vector<double> mu(G->size(), 0), nu(G->size(), 0);
  std::vector<Point> px, py;
  std::vector<double> mx, my;
  for (std::size_t c = 0; c < G->size(); ++c) {
    const Point& z = G->center(c);
    if (z[0] < 0.5 && z[1] < 0.5) mu[c] = 1 + z[0];
    if (z[0] > 0.4 && z[1] > 0.3) nu[c] = 1;
    if (mu[c] > 0) px.push_back(z), mx.push_back(mu[c]);
    if (nu[c] > 0) py.push_back(z), my.push_back(nu[c]);
  }
  SinkhornOptions opt;
  opt.epsilon = 1e-2;
  const EntropicResult g = solve_entropic_grid(*G, mu, nu, opt);
  const EntropicResult d = solve_entropic(normalized({G->space(), px, mx}), normalized({G->space(), py, my}), opt);
  CHECK(g.report.converged);
  CHECK(g.plan.cost == doctest::Approx(d.plan.cost).epsilon(1e-6));
  CHECK(g.plan.source.size() == px.size());
  CHECK(g.plan.marginal_violation() <= 1e-8);
}

TEST_CASE("displacement interpolation") {
  const ModelSpace E = ModelSpace::euclidean(2);
  const WeightedCloud a = uniform_cloud(E, {E.euclidean_point({0, 0})});
  const WeightedCloud b = uniform_cloud(E, {E.euclidean_point({2, 0})});
  const WeightedCloud mid = displacement_interpolate(solve_exact(a, b), 0.5);
  REQUIRE(mid.size() == 1);
  CHECK(mid.points[0][0] == 1);
  CHECK(mid.points[0][1] == 0);
  CHECK(mid.total_mass() == 1);

  const GridPtr G = Grid::euclidean(2, {0, 0, 0}, 1.0 / 8, {32, 8, 1});
  const DiscreteSet A = box_set(G, {0, 0}, {1, 1}), B = box_set(G, {2, 0}, {3, 1});
  const TransportPlan P = solve_exact(indicator_cloud(A), indicator_cloud(B));
  const WeightedCloud half = displacement_interpolate(P, 0.5);
  for (const auto& z : half.points) {
    CHECK(z[0] >= 1 - 1e-12);
    CHECK(z[0] <= 2 + 1e-12);
  }
  CHECK(std::fabs(half.total_mass() - 1) <= 1e-12);
  const WeightedCloud start = displacement_interpolate(P, 1e-12);
  for (std::size_t k = 0; k < start.size(); ++k)
    CHECK(start.points[k][0] == doctest::Approx(P.source.points[P.couplings[k].i][0]));
}

TEST_CASE("barycentric map") {
  const ModelSpace E = ModelSpace::euclidean(2);
  const std::vector<Point> x{E.euclidean_point({0, 0}), E.euclidean_point({1, 0}), E.euclidean_point({0, 1})};
  const std::vector<Point> y{E.euclidean_point({0, 1.1}), E.euclidean_point({0.1, 0}), E.euclidean_point({1.1, 0})};
  const TransportPlan P = solve_exact(uniform_cloud(E, x), uniform_cloud(E, y));
  const auto map = barycentric_map(P);
  CHECK(map[0][0] == doctest::Approx(0.1));
  CHECK(map[1][0] == doctest::Approx(1.1));
  CHECK(map[2][1] == doctest::Approx(1.1));
  CHECK(split_mass_fraction(P) == 0);

  TransportPlan prod{uniform_cloud(E, x), uniform_cloud(E, y), {}, 0};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) prod.couplings.push_back({i, j, 1.0 / 9});
  for (const auto& p : barycentric_map(prod)) {
    CHECK(p[0] == doctest::Approx(0.4));
    CHECK(p[1] == doctest::Approx(1.1 / 3));
  }
  CHECK(split_mass_fraction(prod) == doctest::Approx(1));

  const ModelSpace S = ModelSpace::sphere(2, 1);
  const std::vector<Point> sx{S.from_polar(0.3, 0), S.from_polar(0.3, 2)};
  TransportPlan split{uniform_cloud(S, sx), uniform_cloud(S, sx), {}, 0};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) split.couplings.push_back({i, j, 0.25});
  CHECK_THROWS_AS(barycentric_map(split), UnsupportedError);

  const GridPtr G = Grid::euclidean(2, {0, 0, 0}, 1.0 / 8, {32, 8, 1});
  const DiscreteSet A = box_set(G, {0, 0}, {1, 1}), B = box_set(G, {1.5, 0}, {2.5, 1});
  const TransportPlan T = solve_exact(indicator_cloud(A), indicator_cloud(B));
  const auto tm = barycentric_map(T);
  for (std::size_t i = 0; i < tm.size(); ++i) {
    CHECK(std::fabs(tm[i][0] - T.source.points[i][0] - 1.5) <= 1.0 / 8);
    CHECK(std::fabs(tm[i][1] - T.source.points[i][1]) <= 1.0 / 8);
  }
}

TEST_CASE("wasserstein two-sided estimate") {
  const GridPtr G = Grid::euclidean(2, {0, 0, 0}, 1.0 / 8, {32, 8, 1});
  const DiscreteSet A = box_set(G, {0, 0}, {1, 1}), B = box_set(G, {2, 0}, {3, 1});
  const TransportPlan same = solve_exact(indicator_cloud(A), indicator_cloud(A));
  const WassersteinBounds s = wasserstein_bounds_check(same, A, A, 0);
  CHECK(s.holds);
  CHECK(s.theta_min == 0);
  CHECK(s.w == 0);

  const WassersteinBounds d = wasserstein_bounds_check(solve_exact(indicator_cloud(A), indicator_cloud(B)), A, B, 0);
  CHECK(d.holds);
  CHECK(d.strict_lower);
  CHECK(d.strict_upper);
  CHECK(d.w == doctest::Approx(4).epsilon(1e-9));

  const GridPtr P = Grid::euclidean(1, {0, 0, 0}, 1.0, {4, 1, 1});
  const DiscreteSet a = DiscreteSet::from_cells(P, {0}), b = DiscreteSet::from_cells(P, {3});
  const WassersteinBounds pt = wasserstein_bounds_check(solve_exact(indicator_cloud(a), indicator_cloud(b)), a, b, 0);
  CHECK(pt.holds);
  CHECK(pt.w == 9);
  CHECK(pt.theta_min == 3);
  CHECK(pt.theta_max == 3);
  CHECK_FALSE(pt.strict_lower);
}
