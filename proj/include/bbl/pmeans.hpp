#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bbl {

// Extended-real exponent. Rational values built from integers are kept exact
// so that derived exponents such as p/(pn+1) stay exact as well.
class Exponent {
 public:
  enum class Kind { finite, plus_inf, minus_inf };

  Exponent() = default;
  static Exponent finite(double v);
  static Exponent rational(std::int64_t num, std::int64_t den);
  static Exponent plus_inf();
  static Exponent minus_inf();
  // The lower endpoint -1/n, tagged so that dispatch never relies on rounding.
  static Exponent lower_endpoint(int n);

  // Accepts "inf", "+inf", "-inf", "-1/n" (needs n), "a/b", or a decimal.
  static Exponent parse(std::string_view text, int n = 0);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  bool is_plus_inf() const { return kind_ == Kind::plus_inf; }
  bool is_minus_inf() const { return kind_ == Kind::minus_inf; }
  bool is_exact() const { return exact_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const;
  bool is_zero() const { return is_finite() && value() == 0.0; }
  // True when tagged as the endpoint for n, or exactly equal to -1/n.
  bool is_lower_endpoint(int n) const;
  int endpoint_dim() const { return endpoint_n_; }

  Exponent negated() const;
  std::string str() const;

  friend bool operator==(const Exponent& a, const Exponent& b);

 private:
  Kind kind_ = Kind::finite;
  double value_ = 0.0;
  bool exact_ = false;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  int endpoint_n_ = 0;
};

// Weighted two-point power mean with M = 0 whenever ab = 0.
double pmean(double s, const Exponent& p, double a, double b);
double pmean(double s, double p, double a, double b);

// log M_s^p(e^la, e^lb) for finite log arguments; no zero convention here.
double log_pmean(double s, const Exponent& p, double la, double lb);
double log_pmean(double s, double p, double la, double lb);

// p/(pn+1), with +inf -> 1/n and -1/n -> -inf.
Exponent bbl_target_exponent(const Exponent& p, int n);

// Holder-combined exponent pq/(p+q).
Exponent holder_exponent(const Exponent& p, const Exponent& q);

struct CheckResult {
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs for ">=" checks, rhs - lhs for "<=" checks
};

// Mixed tolerance used by every inequality check.
inline constexpr double kAbsTol = 1e-12;
inline constexpr double kRelTol = 1e-10;
inline double mixed_tol(double scale) { return kAbsTol + kRelTol * (scale < 0 ? -scale : scale); }

CheckResult holder_combination_check(double s, const Exponent& p, const Exponent& q, double a,
                                     double b, double c, double d);

}  // namespace bbl
