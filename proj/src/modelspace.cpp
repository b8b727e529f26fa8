#include "bbl/modelspace.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCutTol = 1e-9;

void check_dims(const ModelSpace& M, const Point& x) {
  if (x.dim != M.ambient_dim()) throw DomainError("point does not belong to this space");
}

// sin(t a)/sin(a) or sinh(t a)/sinh(a) for unit curvature sign
double trig_ratio(double sign_k, double t, double a) {
  return t * sk(sign_k, t * a) / sk(sign_k, a);
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean:
      return "euclidean";
    case SpaceKind::sphere:
      return "sphere";
    case SpaceKind::hyperbolic:
      return "hyperbolic";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "euclidean" || name == "flat") return SpaceKind::euclidean;
  if (name == "sphere" || name == "spherical") return SpaceKind::sphere;
  if (name == "hyperbolic") return SpaceKind::hyperbolic;
  throw DomainError("unknown space kind '" + name + "'");
}

ModelSpace ModelSpace::euclidean(int n) {
  if (n < 1 || n > 3) throw UnsupportedError("euclidean dimension must be 1, 2 or 3");
  ModelSpace M;
  M.kind_ = SpaceKind::euclidean;
  M.n_ = n;
  M.k_ = 0.0;
  return M;
}

ModelSpace ModelSpace::sphere(int n, double k) {
  if (n < 2 || n > 3) throw UnsupportedError("sphere dimension must be 2 or 3");
  if (!(k > 0)) throw DomainError("sphere curvature must be positive");
  ModelSpace M;
  M.kind_ = SpaceKind::sphere;
  M.n_ = n;
  M.k_ = k;
  M.radius_ = 1.0 / std::sqrt(k);
  return M;
}

ModelSpace ModelSpace::hyperbolic(int n, double k) {
  if (n < 2 || n > 3) throw UnsupportedError("hyperbolic dimension must be 2 or 3");
  if (!(k < 0)) throw DomainError("hyperbolic curvature must be negative");
  ModelSpace M;
  M.kind_ = SpaceKind::hyperbolic;
  M.n_ = n;
  M.k_ = k;
  M.radius_ = 1.0 / std::sqrt(-k);
  return M;
}

ModelSpace ModelSpace::make(SpaceKind kind, int n, double k) {
  switch (kind) {
    case SpaceKind::euclidean:
      if (k != 0.0) throw DomainError("euclidean space has curvature 0");
      return euclidean(n);
    case SpaceKind::sphere:
      return sphere(n, k);
    case SpaceKind::hyperbolic:
      return hyperbolic(n, k);
  }
  throw DomainError("unknown space kind");
}

double ModelSpace::diameter() const {
  return kind_ == SpaceKind::sphere ? kPi * radius_ : kInf;
}

bool ModelSpace::contains(const Point& x, double tol) const {
  if (x.dim != ambient_dim()) return false;
  for (int i = 0; i < x.dim; ++i)
    if (!std::isfinite(x[i])) return false;
  if (kind_ == SpaceKind::euclidean) return true;
  double q = 0.0;
  for (int i = 1; i < x.dim; ++i) q += x[i] * x[i];
  const double r2 = radius_ * radius_;
  if (kind_ == SpaceKind::sphere) return std::fabs(q + x[0] * x[0] - r2) <= tol * r2;
  return x[0] > 0 && std::fabs(q - x[0] * x[0] + r2) <= tol * std::max(r2, x[0] * x[0]);
}

Point ModelSpace::normalize(Point x) const {
  check_dims(*this, x);
  if (kind_ == SpaceKind::euclidean) return x;
  double q = 0.0;
  for (int i = 1; i < x.dim; ++i) q += x[i] * x[i];
  if (kind_ == SpaceKind::sphere) {
    const double norm = std::sqrt(q + x[0] * x[0]);
    if (norm == 0) throw DomainError("cannot project the zero vector onto the sphere");
    for (int i = 0; i < x.dim; ++i) x[i] *= radius_ / norm;
  } else {
    x[0] = std::sqrt(radius_ * radius_ + q);
  }
  return x;
}

Point ModelSpace::origin() const {
  Point x;
  x.dim = ambient_dim();
  if (kind_ == SpaceKind::sphere) x[n_] = radius_;
  if (kind_ == SpaceKind::hyperbolic) x[0] = radius_;
  return x;
}

Point ModelSpace::euclidean_point(std::initializer_list<double> xs) const {
  if (static_cast<int>(xs.size()) != ambient_dim()) throw DomainError("wrong number of coordinates");
  Point x;
  x.dim = ambient_dim();
  int i = 0;
  for (double v : xs) x[i++] = v;
  return x;
}

Point ModelSpace::from_polar(double r, double phi) const {
  if (n_ != 2) throw UnsupportedError("polar coordinates need a 2-dimensional space");
  Point x;
  x.dim = ambient_dim();
  if (kind_ == SpaceKind::euclidean) {
    x[0] = r * std::cos(phi);
    x[1] = r * std::sin(phi);
  } else if (kind_ == SpaceKind::sphere) {
    const double t = r / radius_;
    x[0] = radius_ * std::sin(t) * std::cos(phi);
    x[1] = radius_ * std::sin(t) * std::sin(phi);
    x[2] = radius_ * std::cos(t);
  } else {
    const double t = r / radius_;
    x[0] = radius_ * std::cosh(t);
    x[1] = radius_ * std::sinh(t) * std::cos(phi);
    x[2] = radius_ * std::sinh(t) * std::sin(phi);
  }
  return x;
}

double sk(double k, double r) {
  if (!(r >= 0)) throw DomainError("s_k needs r >= 0");
  if (k == 0.0 || r == 0.0) return 1.0;
  const double x = std::sqrt(std::fabs(k)) * r;
  if (k > 0 && x >= kPi) throw DomainError("s_k changes sign beyond sqrt(k) r = pi");
  if (x < 1e-4) {
    const double x2 = x * x;
    return k > 0 ? 1.0 - x2 / 6.0 + x2 * x2 / 120.0 : 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return k > 0 ? std::sin(x) / x : std::sinh(x) / x;
}

double tau(double s, double k, int n, double theta) {
  if (!(s >= 0 && s <= 1)) throw DomainError("tau needs s in [0,1]");
  if (n < 1) throw DomainError("dimension must be positive");
  if (!(theta >= 0)) throw DomainError("tau needs theta >= 0");
  const double kt2 = k * theta * theta;
  if (kt2 == 0.0) return s;
  if (kt2 >= kPi * kPi) return kInf;
  if (s == 0.0) return 0.0;
  const double x = std::sqrt(std::fabs(k)) * theta;
  const double e = 1.0 - 1.0 / n;
  if (x < 1e-4) return s * std::pow(sk(k, s * theta) / sk(k, theta), e);
  const double ratio = k > 0 ? std::sin(s * x) / std::sin(x) : std::sinh(s * x) / std::sinh(x);
  return std::pow(s, 1.0 / n) * std::pow(ratio, e);
}

double distance(const ModelSpace& M, const Point& x, const Point& y) {
  check_dims(M, x);
  check_dims(M, y);
  const int D = x.dim;
  if (M.kind() == SpaceKind::euclidean) {
    double q = 0;
    for (int i = 0; i < D; ++i) q += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(q);
  }
  const double R = M.radius();
  if (M.kind() == SpaceKind::sphere) {
    double qm = 0, qp = 0;
    for (int i = 0; i < D; ++i) {
      qm += (x[i] - y[i]) * (x[i] - y[i]);
      qp += (x[i] + y[i]) * (x[i] + y[i]);
    }
    return 2.0 * R * std::atan2(std::sqrt(qm), std::sqrt(qp));
  }
  double q = -(x[0] - y[0]) * (x[0] - y[0]);
  for (int i = 1; i < D; ++i) q += (x[i] - y[i]) * (x[i] - y[i]);
  if (q < 0) q = 0;
  return 2.0 * R * std::asinh(std::sqrt(q) / (2.0 * R));
}

bool is_cut_locus_pair(const ModelSpace& M, const Point& x, const Point& y) {
  if (M.kind() != SpaceKind::sphere) return false;
  return distance(M, x, y) >= M.diameter() - kCutTol;
}

Point geodesic_point(const ModelSpace& M, const Point& x, const Point& y, double s) {
  check_dims(M, x);
  check_dims(M, y);
  if (!(s >= 0 && s <= 1)) throw DomainError("geodesic parameter must lie in [0,1]");
  if (s == 0.0) return x;
  if (s == 1.0) return y;
  Point z;
  z.dim = x.dim;
  if (M.kind() == SpaceKind::euclidean) {
    for (int i = 0; i < x.dim; ++i) z[i] = (1.0 - s) * x[i] + s * y[i];
    return z;
  }
  const double d = distance(M, x, y);
  if (M.kind() == SpaceKind::sphere && d >= M.diameter() - kCutTol)
    throw CutLocusError("antipodal pair has no unique geodesic");
  const double th = d / M.radius();
  const double sign = M.kind() == SpaceKind::sphere ? 1.0 : -1.0;
  const double a = trig_ratio(sign, 1.0 - s, th);
  const double b = trig_ratio(sign, s, th);
  for (int i = 0; i < x.dim; ++i) z[i] = a * x[i] + b * y[i];
  return M.normalize(z);
}

double vol_distortion_at(const ModelSpace& M, double s, double d) {
  if (M.kind() == SpaceKind::euclidean || d == 0.0) return 1.0;
  if (M.kind() == SpaceKind::sphere && d >= M.diameter() - kCutTol)
    throw CutLocusError("volume distortion undefined at the cut locus");
  return std::pow(sk(M.k(), s * d) / sk(M.k(), d), M.n() - 1);
}

double vol_distortion(const ModelSpace& M, double s, const Point& x, const Point& y) {
  return vol_distortion_at(M, s, distance(M, x, y));
}

double ball_volume(const ModelSpace& M, double r) {
  if (!(r > 0)) throw DomainError("ball radius must be positive");
  const int n = M.n();
  if (M.kind() == SpaceKind::euclidean) {
    if (n == 1) return 2.0 * r;
    if (n == 2) return kPi * r * r;
    if (n == 3) return 4.0 / 3.0 * kPi * r * r * r;
    throw UnsupportedError("unsupported dimension");
  }
  const double R = M.radius();
  const double t = r / R;
  if (M.kind() == SpaceKind::sphere) {
    if (t > kPi) throw DomainError("ball radius exceeds the sphere's diameter");
    if (n == 2) return 2.0 * kPi * R * R * (1.0 - std::cos(t));
    if (n == 3) return kPi * R * R * R * (2.0 * t - std::sin(2.0 * t));
    throw UnsupportedError("unsupported dimension");
  }
  if (n == 2) return 2.0 * kPi * R * R * (std::cosh(t) - 1.0);
  if (n == 3) return kPi * R * R * R * (std::sinh(2.0 * t) - 2.0 * t);
  throw UnsupportedError("unsupported dimension");
}

}  // namespace bbl
