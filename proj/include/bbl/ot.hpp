#pragma once

#include <cstddef>
#include <vector>

#include "bbl/grid.hpp"
#include "bbl/modelspace.hpp"
#include "bbl/sets.hpp"

namespace bbl {

struct WeightedCloud {
  ModelSpace space;
  std::vector<Point> points;
  std::vector<double> masses;

  std::size_t size() const { return points.size(); }
  double total_mass() const;
};

// Rescales masses to sum to one; throws if the total is not positive.
WeightedCloud normalized(WeightedCloud c);
WeightedCloud uniform_cloud(const ModelSpace& M, std::vector<Point> pts);
// Normalized indicator measure of a grid set (cell volumes as weights).
WeightedCloud indicator_cloud(const DiscreteSet& A);

struct Coupling {
  std::size_t i = 0;
  std::size_t j = 0;
  double mass = 0;
};

struct TransportPlan {
  WeightedCloud source;
  WeightedCloud target;
  std::vector<Coupling> couplings;
  double cost = 0;  // sum mass * d^2 / 2

  double recomputed_cost() const;
  // max |row sum - source mass| and |column sum - target mass|
  double marginal_violation() const;
};

inline constexpr double kMaxExactPairs = 1e6;
inline constexpr double kPruneMass = 1e-14;

// Transportation simplex on the bipartite graph, cost d^2/2.
// Ties in pricing and in the ratio test are broken by the first
// candidate in row-major order, so results depend only on input order.
TransportPlan solve_exact(const WeightedCloud& mu, const WeightedCloud& nu);

struct SinkhornReport {
  int iterations = 0;
  double marginal_violation = 0;
  bool converged = false;
  double epsilon = 0;
};

struct EntropicResult {
  TransportPlan plan;
  SinkhornReport report;
};

struct SinkhornOptions {
  double epsilon = 1e-3;
  int max_iter = 5000;
  double tol = 1e-9;
  bool scaling = true;         // epsilon scaling from the cost diameter down
  double keep_threshold = 1e-13;  // couplings below this mass are not stored
};

// Log-domain Sinkhorn on a dense cost matrix.
EntropicResult solve_entropic(const WeightedCloud& mu, const WeightedCloud& nu,
                              const SinkhornOptions& opt = {});

// Same iteration on a euclidean tensor grid, exploiting the separable kernel.
// mu and nu are masses per grid cell (zeros allowed).
EntropicResult solve_entropic_grid(const Grid& G, const std::vector<double>& mu,
                                   const std::vector<double>& nu, const SinkhornOptions& opt = {});

WeightedCloud displacement_interpolate(const TransportPlan& plan, double s);

// x_i -> barycenter of its coupled targets (euclidean) or its unique target.
std::vector<Point> barycentric_map(const TransportPlan& plan);

// source mass that sits on rows coupled to more than one target
double split_mass_fraction(const TransportPlan& plan);

struct WassersteinBounds {
  double theta_min = 0;
  double theta_max = 0;
  double w = 0;  // integral of d^2, i.e. twice the plan cost
  bool holds = false;
  bool strict_lower = false;
  bool strict_upper = false;
};

WassersteinBounds wasserstein_bounds_check(const TransportPlan& plan, const DiscreteSet& A,
                                           const DiscreteSet& B, double k);

}  // namespace bbl
