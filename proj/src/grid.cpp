#include "bbl/grid.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "bbl/errors.hpp"

namespace bbl {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::shared_ptr<const Grid> Grid::euclidean(int n, const std::array<double, 3>& origin, double h,
                                            const std::array<int, 3>& counts) {
  if (!(h > 0)) throw DomainError("grid spacing must be positive");
  std::shared_ptr<Grid> g(new Grid);
  g->space_ = ModelSpace::euclidean(n);
  g->chart_ = Chart::tensor;
  g->index_dims_ = n;
  g->origin_ = origin;
  g->h_ = h;
  g->step0_ = g->step1_ = h;
  g->counts_ = {1, 1, 1};
  for (int d = 0; d < n; ++d) {
    if (counts[d] <= 0) throw DomainError("grid counts must be positive");
    g->counts_[d] = counts[d];
  }
  g->build();
  return g;
}

std::shared_ptr<const Grid> Grid::sphere(const ModelSpace& M, int n_theta, int n_phi) {
  if (M.kind() != SpaceKind::sphere || M.n() != 2)
    throw UnsupportedError("latitude/longitude grids exist only on S^2");
  if (n_theta <= 0 || n_phi < 3) throw DomainError("bad sphere grid counts");
  std::shared_ptr<Grid> g(new Grid);
  g->space_ = M;
  g->chart_ = Chart::latlon;
  g->index_dims_ = 2;
  g->counts_ = {n_theta, n_phi, 1};
  g->step0_ = kPi / n_theta;
  g->step1_ = 2 * kPi / n_phi;
  g->h_ = M.radius() * std::hypot(g->step0_, g->step1_);
  g->build();
  return g;
}

std::shared_ptr<const Grid> Grid::hyperbolic_polar(const ModelSpace& M, double rho_max, int n_rho,
                                                   int n_phi) {
  if (M.kind() != SpaceKind::hyperbolic || M.n() != 2)
    throw UnsupportedError("polar grids exist only on H^2");
  if (!(rho_max > 0) || n_rho <= 0 || n_phi < 3) throw DomainError("bad polar grid parameters");
  std::shared_ptr<Grid> g(new Grid);
  g->space_ = M;
  g->chart_ = Chart::polar;
  g->index_dims_ = 2;
  g->counts_ = {n_rho, n_phi, 1};
  g->rho_max_ = rho_max;
  g->step0_ = rho_max / n_rho;
  g->step1_ = 2 * kPi / n_phi;
  const double R = M.radius();
  g->h_ = std::hypot(g->step0_, R * std::sinh(rho_max / R) * g->step1_);
  g->build();
  return g;
}

void Grid::build() {
  const std::size_t N =
      static_cast<std::size_t>(counts_[0]) * static_cast<std::size_t>(counts_[1]) * counts_[2];
  centers_.resize(N);
  volumes_.resize(N);
  const int n = space_.n();
  for (std::size_t i = 0; i < N; ++i) {
    const auto m = unravel(i);
    Point x;
    x.dim = space_.ambient_dim();
    if (chart_ == Chart::tensor) {
      for (int d = 0; d < n; ++d) x[d] = origin_[d] + (m[d] + 0.5) * h_;
      volumes_[i] = std::pow(h_, n);
    } else if (chart_ == Chart::latlon) {
      const double R = space_.radius();
      const double t0 = m[0] * step0_, t1 = (m[0] + 1) * step0_;
      const double phi = (m[1] + 0.5) * step1_;
      x = space_.from_polar(R * 0.5 * (t0 + t1), phi);
      volumes_[i] = R * R * (std::cos(t0) - std::cos(t1)) * step1_;
    } else {
      const double R = space_.radius();
      const double r0 = m[0] * step0_, r1 = (m[0] + 1) * step0_;
      const double phi = (m[1] + 0.5) * step1_;
      x = space_.from_polar(0.5 * (r0 + r1), phi);
      volumes_[i] = R * R * (std::cosh(r1 / R) - std::cosh(r0 / R)) * step1_;
    }
    centers_[i] = x;
  }
}

double Grid::total_volume() const { return std::accumulate(volumes_.begin(), volumes_.end(), 0.0); }

std::array<int, 3> Grid::unravel(std::size_t i) const {
  std::array<int, 3> m{0, 0, 0};
  m[0] = static_cast<int>(i % counts_[0]);
  i /= counts_[0];
  m[1] = static_cast<int>(i % counts_[1]);
  i /= counts_[1];
  m[2] = static_cast<int>(i);
  return m;
}

std::size_t Grid::ravel(const std::array<int, 3>& m) const {
  return static_cast<std::size_t>(m[0]) +
         static_cast<std::size_t>(counts_[0]) * (m[1] + static_cast<std::size_t>(counts_[1]) * m[2]);
}

long Grid::locate(const Point& x) const {
  if (x.dim != space_.ambient_dim()) throw DomainError("point does not belong to the grid's space");
  std::array<int, 3> m{0, 0, 0};
  if (chart_ == Chart::tensor) {
    for (int d = 0; d < space_.n(); ++d) {
      const double u = std::floor((x[d] - origin_[d]) / h_);
      if (!(u >= 0 && u < counts_[d])) return -1;
      m[d] = static_cast<int>(u);
    }
    return static_cast<long>(ravel(m));
  }
  const double R = space_.radius();
  const double rxy = std::hypot(x[1], chart_ == Chart::latlon ? x[0] : x[2]);
  double phi;
  double a;
  if (chart_ == Chart::latlon) {
    phi = std::atan2(x[1], x[0]);
    a = std::atan2(rxy, x[2]);  // colatitude angle
  } else {
    phi = std::atan2(x[2], x[1]);
    a = R * std::asinh(rxy / R);  // geodesic radius
  }
  if (phi < 0) phi += 2 * kPi;
  double u0 = std::floor(a / step0_);
  if (chart_ == Chart::latlon && u0 >= counts_[0]) u0 = counts_[0] - 1;
  if (!(u0 >= 0 && u0 < counts_[0])) return -1;
  double u1 = std::floor(phi / step1_);
  if (u1 >= counts_[1]) u1 = counts_[1] - 1;
  if (u1 < 0) u1 = 0;
  m[0] = static_cast<int>(u0);
  m[1] = static_cast<int>(u1);
  return static_cast<long>(ravel(m));
}

void Grid::neighbors(std::size_t i, std::vector<std::size_t>& out) const {
  out.clear();
  const auto m = unravel(i);
  const int D = index_dims_;
  const bool wrap = chart_ != Chart::tensor;
  for (int a = -1; a <= 1; ++a)
    for (int b = (D > 1 ? -1 : 0); b <= (D > 1 ? 1 : 0); ++b)
      for (int c = (D > 2 ? -1 : 0); c <= (D > 2 ? 1 : 0); ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        std::array<int, 3> q{m[0] + a, m[1] + b, m[2] + c};
        if (q[0] < 0 || q[0] >= counts_[0]) continue;
        if (wrap) {
          q[1] = (q[1] + counts_[1]) % counts_[1];
        } else if (D > 1 && (q[1] < 0 || q[1] >= counts_[1])) {
          continue;
        }
        if (D > 2 && (q[2] < 0 || q[2] >= counts_[2])) continue;
        out.push_back(ravel(q));
      }
}

bool Grid::same_layout(const Grid& o) const {
  return space_ == o.space_ && chart_ == o.chart_ && counts_ == o.counts_ && origin_ == o.origin_ &&
         h_ == o.h_ && step0_ == o.step0_ && step1_ == o.step1_;
}

}  // namespace bbl
