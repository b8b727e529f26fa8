#include "bbl/pmeans.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_weight(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("weight s must lie in (0,1)");
}

bool parse_int(std::string_view t, std::int64_t& out) {
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

bool parse_real(std::string_view t, double& out) {
  std::string buf(t);
  if (buf.empty()) return false;
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size();
}

}  // namespace

Exponent Exponent::finite(double v) {
  if (std::isnan(v)) throw DomainError("exponent is NaN");
  if (v == kInf) return plus_inf();
  if (v == -kInf) return minus_inf();
  Exponent e;
  e.value_ = v;
  return e;
}

Exponent Exponent::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("zero denominator in exponent");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Exponent e;
  e.exact_ = true;
  e.num_ = num;
  e.den_ = den;
  e.value_ = static_cast<double>(num) / static_cast<double>(den);
  return e;
}

Exponent Exponent::plus_inf() {
  Exponent e;
  e.kind_ = Kind::plus_inf;
  e.value_ = kInf;
  return e;
}

Exponent Exponent::minus_inf() {
  Exponent e;
  e.kind_ = Kind::minus_inf;
  e.value_ = -kInf;
  return e;
}

Exponent Exponent::lower_endpoint(int n) {
  if (n <= 0) throw DomainError("dimension must be positive");
  Exponent e = rational(-1, n);
  e.endpoint_n_ = n;
  return e;
}

Exponent Exponent::parse(std::string_view text, int n) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  std::string low(text);
  std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
  if (low == "inf" || low == "+inf" || low == "infinity" || low == "+infinity") return plus_inf();
  if (low == "-inf" || low == "-infinity") return minus_inf();
  if (low == "-1/n") {
    if (n <= 0) throw DomainError("exponent -1/n needs a dimension");
    return lower_endpoint(n);
  }
  auto slash = low.find('/');
  if (slash != std::string::npos) {
    std::int64_t a = 0, b = 0;
    std::string_view sv(low);
    if (parse_int(sv.substr(0, slash), a) && parse_int(sv.substr(slash + 1), b)) {
      Exponent e = rational(a, b);
      if (n > 0 && e.is_lower_endpoint(n)) e.endpoint_n_ = n;
      return e;
    }
    double x = 0, y = 0;
    if (parse_real(sv.substr(0, slash), x) && parse_real(sv.substr(slash + 1), y) && y != 0)
      return finite(x / y);
    throw DomainError("cannot parse exponent '" + std::string(text) + "'");
  }
  std::int64_t i = 0;
  if (parse_int(low, i)) return rational(i, 1);
  double v = 0;
  if (!parse_real(low, v)) throw DomainError("cannot parse exponent '" + std::string(text) + "'");
  Exponent e = finite(v);
  if (n > 0 && e.is_lower_endpoint(n)) e.endpoint_n_ = n;
  return e;
}

double Exponent::value() const { return value_; }

bool Exponent::is_lower_endpoint(int n) const {
  if (!is_finite() || n <= 0) return false;
  if (endpoint_n_ == n) return true;
  if (exact_) return num_ == -1 && den_ == n;
  return value_ * n == -1.0;
}

Exponent Exponent::negated() const {
  if (kind_ == Kind::plus_inf) return minus_inf();
  if (kind_ == Kind::minus_inf) return plus_inf();
  if (exact_) return rational(-num_, den_);
  return finite(-value_);
}

std::string Exponent::str() const {
  if (kind_ == Kind::plus_inf) return "inf";
  if (kind_ == Kind::minus_inf) return "-inf";
  std::ostringstream os;
  if (exact_) {
    os << num_;
    if (den_ != 1) os << '/' << den_;
  } else {
    os.precision(17);
    os << value_;
  }
  return os.str();
}

bool operator==(const Exponent& a, const Exponent& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ != Exponent::Kind::finite) return true;
  return a.value_ == b.value_;
}

double log_pmean(double s, const Exponent& p, double la, double lb) {
  if (p.is_plus_inf()) return std::max(la, lb);
  if (p.is_minus_inf()) return std::min(la, lb);
  return log_pmean(s, p.value(), la, lb);
}

double log_pmean(double s, double p, double la, double lb) {
  if (la == lb) return la;
  if (p == kInf) return std::max(la, lb);
  if (p == -kInf) return std::min(la, lb);
  const double mu = (1.0 - s) * la + s * lb;
  if (p == 0.0) return mu;
  if (std::fabs(p) < 1e-7) {
    // cumulant expansion of (1/p) log E exp(pX) for the two-point law
    const double delta = lb - la;
    const double var = s * (1.0 - s) * delta * delta;
    const double k3 = s * (1.0 - s) * (1.0 - 2.0 * s) * delta * delta * delta;
    return mu + p * var / 2.0 + p * p * k3 / 6.0;
  }
  // factor out the argument that dominates for this sign of p
  double lm, lo, wo;
  if ((p > 0) == (la > lb)) {
    lm = la;
    lo = lb;
    wo = s;
  } else {
    lm = lb;
    lo = la;
    wo = 1.0 - s;
  }
  const double t = std::expm1(p * (lo - lm));  // in (-1, 0]
  return lm + std::log1p(wo * t) / p;
}

double pmean(double s, const Exponent& p, double a, double b) {
  check_weight(s);
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("p-mean arguments must be nonnegative");
  if (a == 0.0 || b == 0.0) return 0.0;
  if (a == b) return a;
  if (p.is_plus_inf()) return std::max(a, b);
  if (p.is_minus_inf()) return std::min(a, b);
  return pmean(s, p.value(), a, b);
}

double pmean(double s, double p, double a, double b) {
  check_weight(s);
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("p-mean arguments must be nonnegative");
  if (std::isnan(p)) throw DomainError("exponent is NaN");
  if (a == 0.0 || b == 0.0) return 0.0;
  if (a == b) return a;
  if (p == kInf) return std::max(a, b);
  if (p == -kInf) return std::min(a, b);
  if (std::isinf(a) || std::isinf(b)) {
    if (p > 0) return kInf;
    if (p < 0) return std::isinf(a) ? std::pow(s, 1.0 / p) * b : std::pow(1.0 - s, 1.0 / p) * a;
    return kInf;
  }
  return std::exp(log_pmean(s, p, std::log(a), std::log(b)));
}

Exponent bbl_target_exponent(const Exponent& p, int n) {
  if (n <= 0) throw DomainError("dimension must be positive");
  if (p.is_plus_inf()) return Exponent::rational(1, n);
  if (p.is_minus_inf()) throw DomainError("exponent below -1/n");
  if (p.is_lower_endpoint(n)) return Exponent::minus_inf();
  if (p.value() < -1.0 / n) throw DomainError("exponent below -1/n");
  if (p.is_exact()) return Exponent::rational(p.num(), p.num() * n + p.den());
  return Exponent::finite(p.value() / (p.value() * n + 1.0));
}

Exponent holder_exponent(const Exponent& p, const Exponent& q) {
  if ((p.is_plus_inf() && q.is_minus_inf()) || (p.is_minus_inf() && q.is_plus_inf()))
    throw DomainError("p + q is undefined for opposite infinities");
  if (p.is_minus_inf() || q.is_minus_inf()) throw DomainError("p + q < 0");
  if (p.is_plus_inf()) return q;
  if (q.is_plus_inf()) return p;
  if (p.is_exact() && q.is_exact()) {
    const std::int64_t sn = p.num() * q.den() + q.num() * p.den();
    if (sn < 0) throw DomainError("p + q < 0");
    if (p.num() == 0 && q.num() == 0) return Exponent::rational(0, 1);
    if (sn == 0) return Exponent::minus_inf();
    return Exponent::rational(p.num() * q.num(), sn);
  }
  const double a = p.value(), b = q.value();
  const double sum = a + b;
  if (sum < 0) throw DomainError("p + q < 0");
  if (a == 0.0 && b == 0.0) return Exponent::finite(0.0);
  if (sum == 0.0) return Exponent::minus_inf();
  return Exponent::finite(a * b / sum);
}

CheckResult holder_combination_check(double s, const Exponent& p, const Exponent& q, double a,
                                     double b, double c, double d) {
  const Exponent eta = holder_exponent(p, q);
  CheckResult r;
  r.lhs = pmean(s, p, a, b) * pmean(s, q, c, d);
  r.rhs = pmean(s, eta, a * c, b * d);
  r.slack = r.lhs - r.rhs;
  r.pass = r.slack >= -mixed_tol(r.rhs);
  return r;
}

}  // namespace bbl
