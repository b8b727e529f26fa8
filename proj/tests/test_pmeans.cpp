#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "bbl/errors.hpp"
#include "bbl/pmeans.hpp"

using namespace bbl;

TEST_CASE("pmean reference values") {
  CHECK(pmean(0.5, 1.0, 2, 4) == doctest::Approx(3).epsilon(1e-15));
  CHECK(pmean(0.5, Exponent::rational(0, 1), 1, 4) == doctest::Approx(2).epsilon(1e-15));
  CHECK(pmean(0.3, Exponent::plus_inf(), 5, 0) == 0);
  CHECK(pmean(0.3, Exponent::minus_inf(), 2, 7) == 2);
  CHECK(pmean(0.3, Exponent::plus_inf(), 2, 7) == 7);
  CHECK(pmean(0.5, -1.0, 1, 3) == doctest::Approx(1.5));  // harmonic mean 2/(1+1/3)
  CHECK(pmean(0.25, 2.0, 1, 3) == doctest::Approx(std::sqrt(0.75 + 0.25 * 9)));
}

TEST_CASE("pmean zero convention and a == b") {
  for (const Exponent& p : {Exponent::minus_inf(), Exponent::finite(-3), Exponent::rational(0, 1),
                            Exponent::rational(1, 2), Exponent::plus_inf()}) {
    CHECK(pmean(0.4, p, 0, 3) == 0);
    CHECK(pmean(0.4, p, 3, 0) == 0);
    CHECK(pmean(0.4, p, 1.7, 1.7) == 1.7);
  }
}

TEST_CASE("pmean domain errors") {
  CHECK_THROWS_AS(pmean(0.0, 1.0, 1, 2), DomainError);
  CHECK_THROWS_AS(pmean(1.0, 1.0, 1, 2), DomainError);
  CHECK_THROWS_AS(pmean(0.5, 1.0, -1, 2), DomainError);
}

TEST_CASE("pmean homogeneity, monotonicity and the p -> 0 limit") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5), w(0.05, 0.95);
  const double ps[] = {-50, -3, -1, -0.5, -1e-9, 0, 1e-9, 0.3, 1, 2, 7, 60};
  for (int it = 0; it < 2000; ++it) {
    const double a = std::exp(u(rng)), b = std::exp(u(rng)), s = w(rng), lam = std::exp(u(rng));
    double prev = 0;
    for (double p : ps) {
      const double m = pmean(s, p, a, b);
      CHECK(m >= prev * (1 - 1e-13));
      prev = m;
      CHECK(pmean(s, p, lam * a, lam * b) == doctest::Approx(lam * m).epsilon(1e-12));
    }
    const double g = std::pow(a, 1 - s) * std::pow(b, s);
    CHECK(pmean(s, 1e-8, a, b) == doctest::Approx(g).epsilon(1e-6));
    CHECK(pmean(s, -1e-8, a, b) == doctest::Approx(g).epsilon(1e-6));
  }
}

TEST_CASE("small p matches a long double evaluation") {
  const double s = 0.3, a = 2.5, b = 0.7;
  for (double p : {1e-6, 3e-7, -2e-7, 5e-8}) {
    const long double ref =
        std::pow((1 - s) * std::pow((long double)a, (long double)p) + s * std::pow((long double)b, (long double)p),
                 1.0L / p);
    CHECK(pmean(s, p, a, b) == doctest::Approx((double)ref).epsilon(1e-9));
  }
}

TEST_CASE("exponent parsing and exact rationals") {
  CHECK(Exponent::parse("inf").is_plus_inf());
  CHECK(Exponent::parse("+inf").is_plus_inf());
  CHECK(Exponent::parse("-inf").is_minus_inf());
  const Exponent e = Exponent::parse("-1/n", 3);
  CHECK(e.is_lower_endpoint(3));
  CHECK(e.value() == doctest::Approx(-1.0 / 3));
  const Exponent q = Exponent::parse("2/4");
  CHECK(q.is_exact());
  CHECK(q.num() == 1);
  CHECK(q.den() == 2);
  CHECK(Exponent::parse("0.25").value() == 0.25);
  CHECK_THROWS(Exponent::parse("abc"));
  CHECK_THROWS(Exponent::parse("-1/n"));
}

TEST_CASE("bbl target exponent") {
  const Exponent a = bbl_target_exponent(Exponent::plus_inf(), 3);
  CHECK(a.is_exact());
  CHECK(a.num() == 1);
  CHECK(a.den() == 3);
  CHECK(bbl_target_exponent(Exponent::rational(0, 1), 5).is_zero());
  CHECK(bbl_target_exponent(Exponent::rational(-1, 2), 2).is_minus_inf());
  CHECK(bbl_target_exponent(Exponent::lower_endpoint(2), 2).is_minus_inf());
  const Exponent b = bbl_target_exponent(Exponent::rational(1, 1), 2);  // 1/3
  CHECK(b.num() == 1);
  CHECK(b.den() == 3);
  CHECK(bbl_target_exponent(Exponent::finite(0.5), 2).value() == doctest::Approx(0.25));
  CHECK_THROWS_AS(bbl_target_exponent(Exponent::rational(-1, 1), 2), DomainError);
}

TEST_CASE("holder exponent edge cases") {
  CHECK(holder_exponent(Exponent::rational(0, 1), Exponent::rational(0, 1)).is_zero());
  CHECK(holder_exponent(Exponent::plus_inf(), Exponent::rational(-1, 3)).value() == doctest::Approx(-1.0 / 3));
  CHECK(holder_exponent(Exponent::rational(1, 1), Exponent::rational(-1, 1)).is_minus_inf());
  CHECK(holder_exponent(Exponent::rational(2, 1), Exponent::rational(2, 1)).value() == doctest::Approx(1));
  CHECK_THROWS_AS(holder_exponent(Exponent::rational(1, 1), Exponent::rational(-2, 1)), DomainError);
}

TEST_CASE("holder combination check") {
  const CheckResult r = holder_combination_check(0.5, Exponent::rational(1, 1), Exponent::rational(1, 1), 1, 1, 1, 1);
  CHECK(r.pass);
  CHECK(std::fabs(r.slack) <= 1e-15);
  CHECK(holder_combination_check(0.5, Exponent::rational(2, 1), Exponent::rational(2, 1), 1, 2, 3, 4).pass);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4, 4), w(0.05, 0.95), pr(-3, 3);
  int bad = 0;
  for (int it = 0; it < 100000; ++it) {
    double p = pr(rng), q = pr(rng);
    if (p + q < 0) {
      p = -p;
      q = -q;
    }
    const CheckResult c = holder_combination_check(w(rng), Exponent::finite(p), Exponent::finite(q), std::exp(u(rng)),
                                                   std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)));
    if (!c.pass) ++bad;
  }
  CHECK(bad == 0);
  for (int it = 0; it < 1000; ++it) {
    const int n = 1 + it % 4;
    CHECK(holder_combination_check(0.7, Exponent::plus_inf(), Exponent::lower_endpoint(n), std::exp(u(rng)),
                                   std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)))
              .pass);
  }
}
