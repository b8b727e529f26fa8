#include "bbl/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bbl/errors.hpp"

namespace bbl {

MinkowskiNorm MinkowskiNorm::randers(const std::array<double, 4>& Q, const Vec2& b) {
  if (std::fabs(Q[1] - Q[2]) > 1e-14 * (std::fabs(Q[1]) + 1)) throw DomainError("randers: Q must be symmetric");
  const double det = Q[0] * Q[3] - Q[1] * Q[2];
  if (!(Q[0] > 0 && det > 0)) throw DomainError("randers: Q must be positive definite");
  // <Q^{-1} b, b>
  const double qb = (Q[3] * b[0] * b[0] - 2 * Q[1] * b[0] * b[1] + Q[0] * b[1] * b[1]) / det;
  if (!(qb < 1)) throw DomainError("randers: requires <Q^-1 b, b> < 1");
  MinkowskiNorm F;
  F.kind_ = Kind::randers;
  F.Q_ = Q;
  F.b_ = b;
  return F;
}

MinkowskiNorm MinkowskiNorm::matsumoto(double alpha, double v, double g) {
  if (!(alpha >= 0 && alpha < std::numbers::pi / 2)) throw DomainError("matsumoto: alpha must lie in [0, pi/2)");
  if (!(v > 0 && g >= 0)) throw DomainError("matsumoto: v > 0 and g >= 0 required");
  if (!(g * std::sin(alpha) < v)) throw DomainError("matsumoto: requires g sin(alpha) < v");
  MinkowskiNorm F;
  F.kind_ = Kind::matsumoto;
  F.alpha_ = alpha;
  F.v_ = v;
  F.g_ = g;
  return F;
}

MinkowskiNorm MinkowskiNorm::scaled_euclidean(double v) {
  if (!(v > 0)) throw DomainError("speed must be positive");
  MinkowskiNorm F;
  F.v_ = v;
  return F;
}

double MinkowskiNorm::operator()(const Vec2& y) const {
  const double len = std::hypot(y[0], y[1]);
  if (len == 0) return 0.0;
  switch (kind_) {
    case Kind::randers: {
      const double q = Q_[0] * y[0] * y[0] + (Q_[1] + Q_[2]) * y[0] * y[1] + Q_[3] * y[1] * y[1];
      return std::sqrt(q) + b_[0] * y[0] + b_[1] * y[1];
    }
    case Kind::matsumoto:
      return len * len / (v_ * len + 0.5 * g_ * y[1] * std::sin(alpha_));
    case Kind::scaled_euclidean:
      break;
  }
  return len / v_;
}

bool MinkowskiNorm::reversible() const {
  switch (kind_) {
    case Kind::randers: return b_[0] == 0 && b_[1] == 0;
    case Kind::matsumoto: return alpha_ == 0 || g_ == 0;
    case Kind::scaled_euclidean: return true;
  }
  return true;
}

std::string MinkowskiNorm::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::randers:
      os << "randers Q=[[" << Q_[0] << "," << Q_[1] << "],[" << Q_[2] << "," << Q_[3] << "]] b=(" << b_[0] << ","
         << b_[1] << ")";
      break;
    case Kind::matsumoto:
      os << "matsumoto alpha=" << alpha_ * 180 / std::numbers::pi << "deg v=" << v_ << " g=" << g_;
      break;
    case Kind::scaled_euclidean: os << "euclidean v=" << v_; break;
  }
  return os.str();
}

namespace {

Vec2 direction(int i, int m) {
  const double t = 2 * std::numbers::pi * i / m;
  return {std::cos(t), std::sin(t)};
}

Polygon ball(const MinkowskiNorm& F, const Vec2& c, double r, int m, double sign) {
  if (m < 16) throw DomainError("balls need at least 16 angular samples");
  if (!(r > 0)) throw DomainError("radius must be positive");
  Polygon P;
  P.v.reserve(m);
  for (int i = 0; i < m; ++i) {
    const Vec2 u = direction(i, m);
    const double rho = r / F(u);
    P.v.push_back({c[0] + sign * rho * u[0], c[1] + sign * rho * u[1]});
  }
  if (F.kind() == MinkowskiNorm::Kind::matsumoto && !is_convex(P, 0.0)) {
    std::ostringstream os;
    os << "matsumoto ball is not convex for " << F.describe();
    throw DomainError(os.str());
  }
  return P;
}

// exact centroid of the star-shaped unit ball {u : F(u) <= 1} via the
// periodic trapezoid rule on rho(theta)^3 / 3
Vec2 unit_ball_centroid(const MinkowskiNorm& F, int m) {
  double area = 0, cx = 0, cy = 0;
  for (int i = 0; i < m; ++i) {
    const Vec2 u = direction(i, m);
    const double rho = 1.0 / F(u);
    area += rho * rho / 2;
    cx += rho * rho * rho / 3 * u[0];
    cy += rho * rho * rho / 3 * u[1];
  }
  return {cx / area, cy / area};
}

MinkowskiBM bm_at(const MinkowskiNorm& F, const Vec2& x, double r, const Vec2& y, double R, double s, int m) {
  const Polygon A = forward_ball(F, x, r, m);
  const Polygon B = backward_ball(F, y, R, m);
  const Polygon Z = minkowski_combination(A, B, s);
  MinkowskiBM out;
  out.area_a = area(A);
  out.area_b = area(B);
  out.area_z = area(Z);
  out.lhs = std::sqrt(out.area_z);
  out.rhs = (1 - s) * std::sqrt(out.area_a) + s * std::sqrt(out.area_b);
  out.deficit = out.lhs - out.rhs;
  return out;
}

}  // namespace

Polygon forward_ball(const MinkowskiNorm& F, const Vec2& x, double r, int m) { return ball(F, x, r, m, 1.0); }

Polygon backward_ball(const MinkowskiNorm& F, const Vec2& y, double R, int m) { return ball(F, y, R, m, -1.0); }

MinkowskiBM minkowski_bm_deficit(const MinkowskiNorm& F, const Vec2& x, double r, const Vec2& y, double R, double s,
                                 int m) {
  if (!(s > 0 && s < 1)) throw DomainError("weight s must lie in (0,1)");
  MinkowskiBM out = bm_at(F, x, r, y, R, s, m);
  const MinkowskiBM fine = bm_at(F, x, r, y, R, s, 2 * m);
  out.tol = 10 * (std::fabs(fine.lhs - out.lhs) + std::fabs(fine.rhs - out.rhs));
  return out;
}

HomothetyTest homothety_test(const MinkowskiNorm& F, const Vec2& x, double r, const Vec2& y, double R, int m) {
  if (!(r > 0)) throw DomainError("radius must be positive");
  const Polygon B = backward_ball(F, y, R, m);
  const Vec2 cu = unit_ball_centroid(F, m);
  // backward ball is y - R*(unit ball); its centroid is y - R*cu
  HomothetyTest t;
  const Vec2 base{y[0] - 2 * R * cu[0], y[1] - 2 * R * cu[1]};
  t.shift = {base[0] - R / r * x[0], base[1] - R / r * x[1]};
  double worst = 0;
  for (const Vec2& w : B.v) {
    const Vec2 q{w[0] - base[0], w[1] - base[1]};
    const double len = std::hypot(q[0], q[1]);
    const double Fq = F(q);
    const double res = Fq > 0 ? len * std::fabs(1 - R / Fq) : len;
    worst = std::max(worst, res);
  }
  t.residual = worst / R;
  t.translate = t.residual <= kHomothetyTol;
  return t;
}

namespace {

void path(std::ostream& os, const Polygon& P, const char* stroke, double scale, double ox, double oy) {
  os << "<path fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" d=\"";
  for (std::size_t i = 0; i < P.v.size(); ++i)
    os << (i == 0 ? "M" : " L") << ox + scale * P.v[i][0] << "," << oy - scale * P.v[i][1];
  os << " Z\"/>\n";
}

}  // namespace

void write_svg(std::ostream& os, const std::vector<BallPanel>& panels) {
  const double W = 400, H = 400, pad = 20;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W * panels.size() << "\" height=\""
     << H << "\">\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
    for (const Polygon* P : {&p.forward, &p.backward})
      for (const auto& v : P->v)
        for (int d = 0; d < 2; ++d) {
          lo[d] = std::min(lo[d], v[d]);
          hi[d] = std::max(hi[d], v[d]);
        }
    const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
    const double scale = (W - 2 * pad) / (span > 0 ? span : 1);
    const double ox = k * W + pad - scale * lo[0] + (W - 2 * pad - scale * (hi[0] - lo[0])) / 2;
    const double oy = H - pad + scale * lo[1] - (H - 2 * pad - scale * (hi[1] - lo[1])) / 2;
    os << "<g>\n<text x=\"" << k * W + pad << "\" y=\"" << pad << "\" font-size=\"12\">" << p.title << "</text>\n";
    path(os, p.forward, "#1f77b4", scale, ox, oy);
    path(os, p.backward, "#d62728", scale, ox, oy);
    os << "</g>\n";
  }
  os << "</svg>\n";
}

}  // namespace bbl
