#include "bbl/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const GapInput& in) {
  if (!(in.s > 0.0 && in.s < 1.0)) throw DomainError("weight s must lie in (0,1)");
  if (in.n <= 0) throw DomainError("dimension must be positive");
  if (!(in.a > 0 && in.b > 0 && in.c > 0 && in.d > 0))
    throw DomainError("gap arguments must be strictly positive");
  if (in.p.is_minus_inf()) throw DomainError("exponent below -1/n");
  if (in.p.is_finite() && !in.p.is_lower_endpoint(in.n) && in.p.value() < -1.0 / in.n)
    throw DomainError("exponent below -1/n");
}

// log |e^x - e^y|, -inf when equal
double log_absdiff(double x, double y) {
  if (x == y) return -kInf;
  const double hi = std::max(x, y), lo = std::min(x, y);
  return hi + std::log(-std::expm1(lo - hi));
}

// Regime (i), p > 0; arguments enter only through the two log ratios.
double gap_power(double s, double p, int n, double lab, double lbdac) {
  const double pn = p * n;
  const double m = std::max(pn, 1.0);
  const double pt = p / (pn + 1.0);
  const double e1 = p * pt * n / m;
  const double e2 = pt / m;
  const double outer = m / (pt * n);
  const double pref = n / m;
  // first term: M^{-p}(1, a/b), M^{-1/n}(1, bd/ac)
  const double A1 = e1 * log_pmean(s, -p, 0.0, lab);
  const double B1 = e2 * log_pmean(s, -1.0 / n, 0.0, lbdac);
  // second term: M^{-p}(b/a, 1), M^{-1/n}(ac/bd, 1)
  const double A2 = e1 * log_pmean(s, -p, -lab, 0.0);
  const double B2 = e2 * log_pmean(s, -1.0 / n, -lbdac, 0.0);
  const double t1 = std::exp(outer * log_absdiff(A1, B1));
  const double t2 = std::exp(outer * log_absdiff(A2, B2));
  return (1.0 - s) * pref * t1 + s * pref * t2;
}

double gap_geometric(double s, int n, double lbd_minus_lac) {
  if (lbd_minus_lac == 0.0) return 0.0;
  const double st = std::min(s, 1.0 - s);
  // scale so that ac = 1
  const double X = lbd_minus_lac;
  const double lm = log_pmean(s, 1.0 / n, X, 0.0);
  const double ld = log_absdiff(st * X / n, 0.0);
  return std::exp(std::log(n * st) - lm / n + ld / st);
}

double gap_plus_inf(double s, int n, double lab, double lcd) {
  if (lab == 0.0) return 0.0;
  const double st = std::min(s, 1.0 - s);
  // scale so that b = d = 1
  const double lnum = log_absdiff(lab / n, 0.0);
  const double lden = lab / n + std::max(lcd, 0.0) / n;
  const double lm = log_pmean(s, -1.0 / n, lab + lcd, 0.0) / n;
  return std::exp(std::log(n * st) + lnum - lden + lm);
}

}  // namespace

GapRegime gap_regime(const Exponent& p, int n) {
  if (p.is_plus_inf()) return GapRegime::plus_inf;
  if (p.is_lower_endpoint(n)) return GapRegime::lower_endpoint;
  if (std::fabs(p.value()) < 1e-12) return GapRegime::geometric;
  return GapRegime::power;
}

double gap(const GapInput& in) {
  validate(in);
  const double lab = std::log(in.a) - std::log(in.b);
  const double lcd = std::log(in.c) - std::log(in.d);
  switch (gap_regime(in.p, in.n)) {
    case GapRegime::plus_inf:
      return gap_plus_inf(in.s, in.n, lab, lcd);
    case GapRegime::lower_endpoint:
      return gap_plus_inf(in.s, in.n, lcd, lab);
    case GapRegime::geometric:
      return gap_geometric(in.s, in.n, -lab - lcd);
    case GapRegime::power:
      break;
  }
  if (in.p.value() < 0.0) {
    GapInput r = in;
    r.p = bbl_target_exponent(in.p, in.n).negated();
    r.a = in.c;
    r.b = in.d;
    r.c = in.a;
    r.d = in.b;
    return gap(r);
  }
  return gap_power(in.s, in.p.value(), in.n, lab, -lab - lcd);
}

CheckResult quantitative_holder_check(const GapInput& in) {
  const double G = gap(in);
  const Exponent pt = bbl_target_exponent(in.p, in.n);
  const Exponent lower = Exponent::lower_endpoint(in.n);
  CheckResult r;
  r.lhs = pmean(in.s, in.p, in.a, in.b) * pmean(in.s, pt.negated(), in.c, in.d);
  r.rhs = pmean(in.s, lower, in.a * in.c, in.b * in.d) * (1.0 + G);
  r.slack = r.lhs - r.rhs;
  r.pass = r.slack >= -mixed_tol(r.rhs);
  return r;
}

double gap_locus_offset(const GapInput& in) {
  validate(in);
  const double lab = std::log(in.a) - std::log(in.b);
  const double ldc = std::log(in.d) - std::log(in.c);
  switch (gap_regime(in.p, in.n)) {
    case GapRegime::plus_inf:
      return lab;
    case GapRegime::lower_endpoint:
      return -ldc;
    case GapRegime::geometric:
      return lab - ldc;
    case GapRegime::power:
      break;
  }
  const double p = in.p.value();
  return lab - ldc / (p * in.n + 1.0);
}

bool gap_zero_locus(const GapInput& in, double tol) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  return std::fabs(gap_locus_offset(in)) <= tol;
}

CheckResult quantitative_young_check(double u, double v, double r) {
  if (!(r >= 2.0)) throw DomainError("Young exponent r must be >= 2");
  if (!(u >= 0.0 && v >= 0.0)) throw DomainError("Young arguments must be nonnegative");
  const double rp = r / (r - 1.0);
  CheckResult res;
  res.lhs = u * v;
  res.rhs = std::pow(u, r) / r + std::pow(v, rp) / rp -
            std::pow(std::fabs(u - std::pow(v, 1.0 / (r - 1.0))), r) / r;
  res.slack = res.rhs - res.lhs;
  res.pass = res.slack >= -mixed_tol(res.lhs);
  return res;
}

std::vector<Exponent> sweep_exponents(int n) {
  return {Exponent::lower_endpoint(n), Exponent::rational(-1, 2 * n), Exponent::finite(-1e-3),
          Exponent::rational(0, 1), Exponent::finite(1e-3), Exponent::rational(1, 2),
          Exponent::rational(1, 1), Exponent::rational(3, 1), Exponent::plus_inf()};
}

GapInput sample_gap_input(std::mt19937_64& rng) {
  static const int dims[] = {1, 2, 3, 5};
  std::uniform_int_distribution<int> pick_n(0, 3), pick_p(0, 8), pick_s(1, 9);
  std::uniform_real_distribution<double> lu(std::log(1e-3), std::log(1e3));
  GapInput in;
  in.n = dims[pick_n(rng)];
  in.p = sweep_exponents(in.n)[static_cast<std::size_t>(pick_p(rng))];
  in.s = pick_s(rng) / 10.0;
  in.a = std::exp(lu(rng));
  in.b = std::exp(lu(rng));
  in.c = std::exp(lu(rng));
  in.d = std::exp(lu(rng));
  return in;
}

}  // namespace bbl
