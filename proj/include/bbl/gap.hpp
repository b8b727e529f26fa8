#pragma once

#include <random>
#include <vector>

#include "bbl/pmeans.hpp"

namespace bbl {

struct GapInput {
  double s = 0.5;
  Exponent p;
  int n = 1;
  double a = 1, b = 1, c = 1, d = 1;
};

enum class GapRegime { power, geometric, plus_inf, lower_endpoint };

GapRegime gap_regime(const Exponent& p, int n);

// Gap function of the quantitative Holder inequality; all four regimes.
double gap(const GapInput& in);

// M^p(a,b) M^{-p~}(c,d) >= M^{-1/n}(ac,bd) (1 + G).
CheckResult quantitative_holder_check(const GapInput& in);

// Algebraic zero condition of the active regime, compared in log scale.
bool gap_zero_locus(const GapInput& in, double tol);

// Signed log-distance from the zero locus (0 on the locus).
double gap_locus_offset(const GapInput& in);

// uv <= u^r/r + v^r'/r' - |u - v^{1/(r-1)}|^r / r for r >= 2.
CheckResult quantitative_young_check(double u, double v, double r);

// Random instance: p in {-1/n, -1/(2n), -1e-3, 0, 1e-3, 1/2, 1, 3, +inf},
// n in {1,2,3,5}, s in {0.1,...,0.9}, a..d log-uniform in [1e-3, 1e3].
GapInput sample_gap_input(std::mt19937_64& rng);
std::vector<Exponent> sweep_exponents(int n);

}  // namespace bbl
