#include "bbl/bbl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shared(const GridDensity& a, const GridDensity& b) {
  if (a.grid_ptr() != b.grid_ptr() && !a.grid().same_layout(b.grid()))
    throw DomainError("densities live on different grids");
}

double positive_mass(const GridDensity& u, const char* name) {
  if (!(u.mass() > 0)) throw DomainError(std::string(name) + " has zero mass");
  return u.mass();
}

// exponent 1/(pn+1), with the p = +inf limit 0
double inverse_scale_exponent(const Exponent& p, int n) {
  if (p.is_plus_inf()) return 0.0;
  return 1.0 / (p.value() * n + 1.0);
}

// closing by one cell: dilation followed by erosion
DiscreteSet closing(const DiscreteSet& A) {
  const DiscreteSet D = dilate(A, 1);
  const Grid& G = D.grid();
  std::vector<std::uint8_t> mask(G.size(), 0);
  std::vector<std::size_t> nb;
  for (auto c : D.cells()) {
    G.neighbors(c, nb);
    bool keep = true;
    for (auto q : nb)
      if (!D.has_cell(q)) {
        keep = false;
        break;
      }
    mask[c] = keep || A.has_cell(c);
  }
  return DiscreteSet::from_mask(D.grid_ptr(), std::move(mask));
}

double symdiff_measure(const DiscreteSet& A, const DiscreteSet& B) {
  const Grid& G = A.grid();
  double m = 0;
  for (std::size_t i = 0; i < G.size(); ++i)
    if (A.has_cell(i) != B.has_cell(i)) m += G.volume(i);
  return m;
}

// residual of B against scale*A + shift, as in homothety_fit
double homothety_residual(const DiscreteSet& A, const DiscreteSet& B, double scale, const std::vector<double>& shift) {
  const Grid& GA = A.grid();
  const Grid& GB = B.grid();
  const int n = GA.space().n();
  double miss = 0, mB = 0;
  for (auto j : B.cells()) {
    Point y = GB.center(j);
    for (int d = 0; d < n; ++d) y[d] = (y[d] - shift[d]) / scale;
    const long c = GA.locate(y);
    if (c < 0 || !A.has_cell(static_cast<std::size_t>(c))) miss += GB.volume(j);
    mB += GB.volume(j);
  }
  const double sn = std::pow(scale, n);
  for (auto i : A.cells()) {
    Point x = GA.center(i);
    for (int d = 0; d < n; ++d) x[d] = scale * x[d] + shift[d];
    const long c = GB.locate(x);
    if (c < 0 || !B.has_cell(static_cast<std::size_t>(c))) miss += sn * GA.volume(i);
  }
  return mB > 0 ? miss / mB : kInf;
}

double g_factor(const Exponent& p, double c0) {
  if (p.is_plus_inf() || p.is_zero()) return 1.0;
  return std::pow(c0, 1.0 / p.value());
}

struct SupportSample {
  std::vector<Point> pts;
  std::vector<double> vals;
};

SupportSample support_sample(const GridDensity& u) {
  SupportSample S;
  const DiscreteSet supp = u.support();
  for (auto c : supp.cells()) {
    S.pts.push_back(u.grid().center(c));
    S.vals.push_back(u.value(c));
  }
  return S;
}

}  // namespace

GridDensity::GridDensity(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw DomainError("null grid");
  if (values_.size() != grid_->size()) throw DomainError("density size does not match the grid");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0) || !std::isfinite(values_[i])) throw DomainError("density values must be finite and >= 0");
    mass_ += values_[i] * grid_->volume(i);
  }
}

double GridDensity::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double GridDensity::at(const Point& x) const {
  const long c = grid_->locate(x);
  return c < 0 ? 0.0 : values_[static_cast<std::size_t>(c)];
}

DiscreteSet GridDensity::support(double cut) const {
  const double thr = cut * max_value();
  std::vector<std::uint8_t> mask(values_.size(), 0);
  for (std::size_t i = 0; i < values_.size(); ++i) mask[i] = values_[i] > 0 && values_[i] >= thr;
  return DiscreteSet::from_mask(grid_, std::move(mask));
}

WeightedCloud GridDensity::normalized_cloud() const {
  if (!(mass_ > 0)) throw DomainError("density has zero mass");
  WeightedCloud c;
  c.space = space();
  const DiscreteSet supp = support();
  double t = 0;
  for (auto i : supp.cells()) {
    c.points.push_back(grid_->center(i));
    c.masses.push_back(values_[i] * grid_->volume(i));
    t += c.masses.back();
  }
  for (auto& m : c.masses) m /= t;
  return c;
}

GridDensity GridDensity::scaled(double factor) const {
  std::vector<double> v = values_;
  for (auto& x : v) x *= factor;
  return GridDensity(grid_, std::move(v));
}

GridDensity indicator(const DiscreteSet& A, double weight) {
  std::vector<double> v(A.grid().size(), 0.0);
  for (auto c : A.cells()) v[c] = weight;
  return GridDensity(A.grid_ptr(), std::move(v));
}

GridDensity sample(const GridPtr& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid->center(i));
  return GridDensity(grid, std::move(v));
}

double total_variation(const GridDensity& u) {
  const Grid& G = u.grid();
  const auto& cnt = G.counts();
  const int D = G.index_dims();
  double tv = 0;
  if (G.chart() == Grid::Chart::tensor) {
    const double face = std::pow(G.h(), G.space().n() - 1);
    for (std::size_t i = 0; i < G.size(); ++i) {
      const auto m = G.unravel(i);
      for (int d = 0; d < D; ++d) {
        if (m[d] == 0) tv += u.value(i) * face;
        auto q = m;
        ++q[d];
        tv += (q[d] < cnt[d] ? std::fabs(u.value(i) - u.value(G.ravel(q))) : u.value(i)) * face;
      }
    }
    return tv;
  }
  const double R = G.space().radius();
  for (std::size_t i = 0; i < G.size(); ++i) {
    const auto m = G.unravel(i);
    const double edge = (m[0] + 1) * G.step0();
    // face between rows m0 and m0+1, then the face along the angular direction
    const double f0 = G.chart() == Grid::Chart::latlon ? R * std::sin(edge) * G.step1()
                                                       : R * std::sinh(edge / R) * G.step1();
    const double f1 = G.chart() == Grid::Chart::latlon ? R * G.step0() : G.step0();
    if (m[0] + 1 < cnt[0]) {
      tv += std::fabs(u.value(i) - u.value(G.ravel({m[0] + 1, m[1], 0}))) * f0;
    } else {
      tv += u.value(i) * f0;
    }
    tv += std::fabs(u.value(i) - u.value(G.ravel({m[0], (m[1] + 1) % cnt[1], 0}))) * f1;
  }
  return tv;
}

double discretization_error(const std::vector<const GridDensity*>& fields, double blur) {
  if (fields.empty()) return 0.0;
  const double h = fields.front()->grid().h();
  double sum = 0;
  for (const auto* u : fields)
    if (u->mass() > 0) sum += total_variation(*u) / u->mass();
  return (h + blur) * sum;
}

double deficit(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s, const Exponent& p) {
  const double mf = positive_mass(f, "f"), mg = positive_mass(g, "g");
  const Exponent target = bbl_target_exponent(p, f.space().n());
  return h.mass() / pmean(s, target, mf, mg) - 1.0;
}

GridDensity admissible_h(const GridDensity& f, const GridDensity& g, double s, const Exponent& p) {
  require_shared(f, g);
  if (!(s > 0 && s < 1)) throw DomainError("weight s must lie in (0,1)");
  bbl_target_exponent(p, f.space().n());  // range check
  const SupportSample F = support_sample(f), Gs = support_sample(g);
  if (static_cast<double>(F.pts.size()) * static_cast<double>(Gs.pts.size()) > kMaxAdmissiblePairs)
    throw DomainError("admissible h: too many support pairs; coarsen the grid");
  const Grid& grid = f.grid();
  const ModelSpace& M = f.space();
  const bool flat = M.kind() == SpaceKind::euclidean;
  std::vector<double> hv(grid.size(), 0.0);
  for (std::size_t i = 0; i < F.pts.size(); ++i)
    for (std::size_t j = 0; j < Gs.pts.size(); ++j) {
      const Point& x = F.pts[i];
      const Point& y = Gs.pts[j];
      double a = F.vals[i], b = Gs.vals[j];
      if (!flat) {
        if (is_cut_locus_pair(M, x, y)) throw CutLocusError("supports contain a cut-locus pair");
        const double d = distance(M, x, y);
        a /= vol_distortion_at(M, 1.0 - s, d);
        b /= vol_distortion_at(M, s, d);
      }
      const long c = grid.locate(geodesic_point(M, x, y, s));
      if (c < 0) throw DomainError("interpolant falls outside the grid");
      double& slot = hv[static_cast<std::size_t>(c)];
      slot = std::max(slot, pmean(s, p, a, b));
    }
  return GridDensity(f.grid_ptr(), std::move(hv));
}

double deficit_lower_bound(const GridDensity& f, const GridDensity& g, double s, const Exponent& p,
                           const TransportPlan& plan) {
  require_shared(f, g);
  const double mf = positive_mass(f, "f"), mg = positive_mass(g, "g");
  const ModelSpace& M = f.space();
  if (!(plan.source.space == M)) throw DomainError("plan and densities live on different spaces");
  const int n = M.n();
  double sum = 0;
  for (const auto& cp : plan.couplings) {
    const Point& x = plan.source.points[cp.i];
    const Point& y = plan.target.points[cp.j];
    if (f.grid().locate(x) < 0 || g.grid().locate(y) < 0)
      throw DomainError("plan points do not lie on the density grid");
    const double d = distance(M, x, y);
    const double a = f.at(x) / vol_distortion_at(M, 1.0 - s, d);
    const double b = g.at(y) / vol_distortion_at(M, s, d);
    if (!(a > 0 && b > 0)) continue;
    sum += cp.mass * gap({s, p, n, a, b, 1.0 / mf, 1.0 / mg});
  }
  return sum;
}

double EqualityDiagnostics::max_residual() const {
  double r = std::max({support, jacobian, ratio});
  if (lower_endpoint) r = std::max(r, mass_balance);
  return r;
}

EqualityDiagnostics equality_diagnostics(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s,
                                         const Exponent& p, const TransportPlan& plan) {
  require_shared(f, g);
  require_shared(f, h);
  const double mf = positive_mass(f, "f"), mg = positive_mass(g, "g");
  const ModelSpace& M = f.space();
  const int n = M.n();
  EqualityDiagnostics out;
  out.lower_endpoint = p.is_lower_endpoint(n);
  const Grid& G = h.grid();

  std::vector<std::uint8_t> img(G.size(), 0);
  double predicted = 0, wsum = 0, rsum = 0;
  const double e = out.lower_endpoint ? 0.0 : inverse_scale_exponent(p, n);
  const Exponent pt = bbl_target_exponent(p, n);
  const double Mq = out.lower_endpoint ? 0.0 : pmean(s, pt, mf, mg);
  double J = 1.0;
  if (!out.lower_endpoint) {
    if (p.is_plus_inf()) {
      J = pmean(s, pt, 1.0, mg / mf);
    } else if (!p.is_zero()) {
      const double pn = p.value() * n;
      J = std::pow(pmean(s, pt, 1.0, mg / mf), pn / (pn + 1.0));
    }
  }
  const Exponent lower = Exponent::lower_endpoint(n);
  for (const auto& cp : plan.couplings) {
    const Point& x = plan.source.points[cp.i];
    const Point& y = plan.target.points[cp.j];
    const double d = distance(M, x, y);
    const Point z = geodesic_point(M, x, y, s);
    const long c = G.locate(z);
    if (c >= 0) img[static_cast<std::size_t>(c)] = 1;
    const double fx = f.at(x), gy = g.at(y), hz = c >= 0 ? h.value(static_cast<std::size_t>(c)) : 0.0;
    if (!(fx > 0)) continue;
    const double v1 = vol_distortion_at(M, 1.0 - s, d);
    const double v0 = vol_distortion_at(M, s, d);
    double res;
    if (out.lower_endpoint) {
      predicted += hz > 0 ? cp.mass * mf / hz : 0.0;
      const double target = pmean(s, lower, fx / v1, gy / v0);
      res = target > 0 ? std::fabs(hz / target - 1.0) : 1.0;
    } else {
      predicted += J * cp.mass * mf / fx * v1;
      const double rh = hz / std::pow(Mq, e);
      const double rf = fx / (v1 * std::pow(mf, e));
      const double rg = gy / (v0 * std::pow(mg, e));
      res = std::max(std::fabs(rh / rf - 1.0), std::fabs(rg / rf - 1.0));
    }
    rsum += cp.mass * res;
    wsum += cp.mass;
  }
  const DiscreteSet image = closing(DiscreteSet::from_mask(h.grid_ptr(), std::move(img)));
  const DiscreteSet supp_h = h.support();
  const double mh = measure(supp_h).value;
  const double mimg = measure(image).value;
  out.support = mh > 0 ? symdiff_measure(image, supp_h) / mh : kInf;
  out.jacobian = predicted > 0 ? std::fabs(mimg / predicted - 1.0) : kInf;
  out.ratio = wsum > 0 ? rsum / wsum : kInf;
  out.mass_balance = std::fabs(mg / mf - 1.0);
  return out;
}

DeficitReport deficit_report(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s,
                             const Exponent& p, const TransportPlan& plan, double blur, bool with_diagnostics) {
  DeficitReport r;
  r.deficit = deficit(f, g, h, s, p);
  r.lower_bound = deficit_lower_bound(f, g, s, p, plan);
  r.margin = r.deficit - r.lower_bound;
  r.discretization_error = discretization_error({&f, &g, &h}, blur);
  r.h = f.grid().h();
  r.calibrated_c = r.discretization_error / r.h;
  r.bound_holds = r.margin >= -r.discretization_error;
  if (with_diagnostics) r.diagnostics = equality_diagnostics(f, g, h, s, p, plan);
  return r;
}

double dubuc_h_factor(double s, const Exponent& p, int n, double c0) {
  if (p.is_plus_inf() || p.is_zero()) return 1.0;
  if (p.is_lower_endpoint(n)) return pmean(s, Exponent::lower_endpoint(n), 1.0, std::pow(c0, -n));
  const double pv = p.value();
  const double pn1 = pv * n + 1.0;
  return std::pow(pmean(s, bbl_target_exponent(p, n), 1.0, std::pow(c0, pn1 / pv)), 1.0 / pn1);
}

DubucTriple dubuc_construct(const GridPtr& grid, const std::function<double(const Point&)>& Phi, double s,
                            const Exponent& p, double c0, const std::vector<double>& x0) {
  const ModelSpace& M = grid->space();
  if (M.kind() != SpaceKind::euclidean) throw UnsupportedError("normal form lives in euclidean space");
  const int n = M.n();
  if (static_cast<int>(x0.size()) != n) throw DomainError("translation has the wrong dimension");
  if (!(c0 > 0)) throw DomainError("c0 must be positive");
  if (!(s > 0 && s < 1)) throw DomainError("weight s must lie in (0,1)");
  bbl_target_exponent(p, n);
  if (p.is_zero() && c0 != 1.0) throw DomainError("p = 0 requires c0 = 1");
  const double gf = g_factor(p, c0);
  const double hf = dubuc_h_factor(s, p, n, c0);
  const double lam = 1.0 - s + s * c0;
  auto pull = [&](const Point& y, double scale, double shift_weight) {
    Point x = y;
    for (int d = 0; d < n; ++d) x[d] = (y[d] - shift_weight * x0[d]) / scale;
    return x;
  };
  DubucTriple T;
  T.f = sample(grid, Phi);
  T.g = sample(grid, [&](const Point& y) { return gf * Phi(pull(y, c0, 1.0)); });
  T.h = sample(grid, [&](const Point& z) { return hf * Phi(pull(z, lam, s)); });
  return T;
}

DubucTriple dubuc_construct(const GridDensity& Phi, double s, const Exponent& p, double c0,
                            const std::vector<double>& x0) {
  const DiscreteSet K = Phi.support();
  if (K.empty()) throw DomainError("Phi has empty support");
  if (Phi.space().kind() == SpaceKind::euclidean && Phi.space().n() <= 2 &&
      convexity_residual(K) > 8 * Phi.grid().h())
    throw DomainError("Phi must be supported on a convex set");
  return dubuc_construct(Phi.grid_ptr(), [&Phi](const Point& x) { return Phi.at(x); }, s, p, c0, x0);
}

DubucFit dubuc_fit(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s, const Exponent& p,
                   unsigned seed, int samples) {
  require_shared(f, g);
  require_shared(f, h);
  if (f.space().kind() != SpaceKind::euclidean) throw UnsupportedError("normal form fit needs euclidean space");
  const int n = f.space().n();
  const double hstep = f.grid().h();
  const DiscreteSet F = f.support(), Gs = g.support(), H = h.support();
  DubucFit fit;
  fit.convexity = convexity_residual(F);
  const HomothetyFit hg = homothety_fit(F, Gs);
  fit.c0 = hg.c0;
  fit.x0 = hg.x0;
  fit.support_g = hg.residual;
  const double lam = 1.0 - s + s * fit.c0;
  std::vector<double> sx0(n);
  for (int d = 0; d < n; ++d) sx0[d] = s * fit.x0[d];
  fit.support_h = homothety_residual(F, H, lam, sx0);
  fit.t = s * fit.c0 / lam;

  const double gf = g_factor(p, fit.c0);
  const double hf = dubuc_h_factor(s, p, n, fit.c0);
  double eg = 0, eh = 0, wg = 0, wh = 0;
  for (auto c : F.cells()) {
    const Point& x = f.grid().center(c);
    Point y = x, z = x;
    for (int d = 0; d < n; ++d) {
      y[d] = fit.c0 * x[d] + fit.x0[d];
      z[d] = lam * x[d] + sx0[d];
    }
    const double v = f.grid().volume(c);
    eg += v * std::fabs(g.at(y) - gf * f.value(c));
    wg += v * gf * f.value(c);
    eh += v * std::fabs(h.at(z) - hf * f.value(c));
    wh += v * hf * f.value(c);
  }
  fit.function_g = wg > 0 ? eg / wg : kInf;
  fit.function_h = wh > 0 ? eh / wh : kInf;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, F.size() - 1);
  const double fmax = f.max_value();
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const std::size_t a = F.cells()[pick(rng)], b = F.cells()[pick(rng)];
    const Point& x = f.grid().center(a);
    const Point& y = f.grid().center(b);
    Point z = x;
    for (int d = 0; d < n; ++d) z[d] = (1.0 - fit.t) * x[d] + fit.t * y[d];
    const long c = f.grid().locate(z);
    if (c < 0 || !F.has_cell(static_cast<std::size_t>(c))) continue;
    const double want = pmean(fit.t, p, f.value(a), f.value(b));
    worst = std::max(worst, (want - f.value(static_cast<std::size_t>(c))) / fmax);
  }
  fit.concavity = worst;
  const double thr = 8 * hstep;
  fit.ok = fit.convexity <= thr && fit.support_g <= thr && fit.support_h <= thr && fit.function_g <= thr &&
           fit.function_h <= thr && fit.concavity <= thr;
  return fit;
}

QuantitativeBM quantitative_bm_exact(double mA, double mB, double mZ, int n, double s, const Exponent& p) {
  if (!(mA > 0 && mB > 0)) throw DomainError("quantitative BM needs sets of positive measure");
  QuantitativeBM q;
  q.measure_a = mA;
  q.measure_b = mB;
  q.measure_z = mZ;
  q.deficit = mZ / pmean(s, bbl_target_exponent(p, n), mA, mB) - 1.0;
  q.bound = gap({s, p, n, 1.0, 1.0, mB, mA});
  if (p.is_zero()) {
    const double st = std::min(s, 1.0 - s);
    q.closed_form_bound = n * st * std::pow(std::fabs(std::pow(mA, st / n) - std::pow(mB, st / n)), 1.0 / st) /
                          ((1.0 - s) * std::pow(mA, 1.0 / n) + s * std::pow(mB, 1.0 / n));
  }
  q.holds = q.deficit >= q.bound - mixed_tol(q.bound);
  return q;
}

QuantitativeBM quantitative_bm_boxes(const std::vector<double>& a_lo, const std::vector<double>& a_hi,
                                     const std::vector<double>& b_lo, const std::vector<double>& b_hi, double s,
                                     const Exponent& p) {
  const std::size_t n = a_lo.size();
  if (a_hi.size() != n || b_lo.size() != n || b_hi.size() != n || n == 0)
    throw DomainError("box corners must share one dimension");
  double mA = 1, mB = 1, mZ = 1;
  for (std::size_t d = 0; d < n; ++d) {
    const double la = a_hi[d] - a_lo[d], lb = b_hi[d] - b_lo[d];
    if (!(la > 0 && lb > 0)) throw DomainError("degenerate box");
    mA *= la;
    mB *= lb;
    mZ *= (1.0 - s) * la + s * lb;
  }
  return quantitative_bm_exact(mA, mB, mZ, static_cast<int>(n), s, p);
}

QuantitativeBM quantitative_bm(const DiscreteSet& A, const DiscreteSet& B, double s, const Exponent& p) {
  if (A.space().kind() != SpaceKind::euclidean) throw UnsupportedError("quantitative BM is euclidean");
  const Measure ma = measure(A), mb = measure(B);
  if (!(ma.value > 0 && mb.value > 0)) throw DomainError("quantitative BM needs sets of positive measure");
  const DiscreteSet Z = interpolation_set(A, B, s);
  const Measure mz = measure(Z);
  QuantitativeBM q = quantitative_bm_exact(ma.value, mb.value, mz.value, A.space().n(), s, p);
  const double ez = (mz.outer - mz.inner) / mz.value;
  const double ea = (ma.outer - ma.inner) / ma.value;
  const double eb = (mb.outer - mb.inner) / mb.value;
  q.discretization_error = (1.0 + q.deficit) * (ez + ea + eb);
  q.holds = q.deficit >= q.bound - q.discretization_error;
  return q;
}

DistortedBM distorted_bm(const DiscreteSet& A, const DiscreteSet& B, double s) {
  const ModelSpace& M = A.space();
  const double k = M.k();
  const int n = M.n();
  DistortedBM r;
  r.theta = theta(A, B, k);
  const double t1 = tau(1.0 - s, k, n, r.theta), t2 = tau(s, k, n, r.theta);
  if (std::isinf(t1) || std::isinf(t2)) {
    r.void_inequality = true;
    r.rhs = kInf;
    return r;
  }
  const Measure ma = measure(A), mb = measure(B);
  const DiscreteSet Z = interpolation_set(A, B, s);
  const Measure mz = measure(Z);
  const double e = 1.0 / n;
  r.lhs = std::pow(mz.value, e);
  r.rhs = t1 * std::pow(ma.value, e) + t2 * std::pow(mb.value, e);
  r.deficit = r.lhs - r.rhs;
  r.tol = 0.5 * (std::pow(mz.outer, e) - std::pow(mz.inner, e)) +
          0.5 * (t1 * (std::pow(ma.outer, e) - std::pow(ma.inner, e)) +
                 t2 * (std::pow(mb.outer, e) - std::pow(mb.inner, e)));
  r.holds = r.deficit >= -r.tol;
  return r;
}

DubucTriple distorted_bm_densities(const DiscreteSet& A, const DiscreteSet& B, double s) {
  const ModelSpace& M = A.space();
  const double k = M.k();
  const int n = M.n();
  const double th = theta(A, B, k);
  if (std::isinf(tau(s, k, n, th)) || std::isinf(tau(1.0 - s, k, n, th)))
    throw DomainError("distortion coefficient is infinite; inequality void");
  const double wf = std::pow(sk(k, (1.0 - s) * th) / sk(k, th), n - 1);
  const double wg = std::pow(sk(k, s * th) / sk(k, th), n - 1);
  DubucTriple T;
  T.f = indicator(A, wf);
  T.g = indicator(B, wg);
  T.h = indicator(interpolation_set(A, B, s), 1.0);
  return T;
}

double curvature_condition_violation(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s,
                                     const Exponent& p, unsigned seed, int samples) {
  require_shared(f, g);
  require_shared(f, h);
  const ModelSpace& M = f.space();
  const double k = M.k();
  const int n = M.n();
  const DiscreteSet F = f.support(), Gs = g.support();
  if (F.empty() || Gs.empty()) throw DomainError("empty support");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pa(0, F.size() - 1), pb(0, Gs.size() - 1);
  double worst = 0;
  for (int it = 0; it < samples; ++it) {
    const std::size_t a = F.cells()[pa(rng)], b = Gs.cells()[pb(rng)];
    const Point& x = f.grid().center(a);
    const Point& y = g.grid().center(b);
    const double d = distance(M, x, y);
    const double wf = std::pow(sk(k, d) / sk(k, (1.0 - s) * d), n - 1);
    const double wg = std::pow(sk(k, d) / sk(k, s * d), n - 1);
    const double want = pmean(s, p, wf * f.value(a), wg * g.value(b));
    const double have = h.at(geodesic_point(M, x, y, s));
    if (want > 0) worst = std::max(worst, (want - have) / want);
  }
  return worst;
}

double CurvatureResiduals::max_residual() const { return std::max({ratio_f, ratio_g, mass_balance}); }

CurvatureResiduals curvature_equality_residuals(const GridDensity& f, const GridDensity& g, const GridDensity& h,
                                                double s, const Exponent& p, const TransportPlan& plan) {
  require_shared(f, g);
  require_shared(f, h);
  const ModelSpace& M = f.space();
  const double k = M.k();
  const int n = M.n();
  const double mf = positive_mass(f, "f"), mg = positive_mass(g, "g");
  const bool lower = p.is_lower_endpoint(n);
  CurvatureResiduals out;
  double sf = 0, sg = 0, w = 0;
  const double e = lower ? 0.0 : inverse_scale_exponent(p, n);
  const double Mq = lower ? 0.0 : pmean(s, bbl_target_exponent(p, n), mf, mg);
  for (const auto& cp : plan.couplings) {
    const Point& x = plan.source.points[cp.i];
    const Point& y = plan.target.points[cp.j];
    const double d = distance(M, x, y);
    const double wf = std::pow(sk(k, d) / sk(k, (1.0 - s) * d), n - 1);
    const double wg = std::pow(sk(k, d) / sk(k, s * d), n - 1);
    const double fx = f.at(x), gy = g.at(y);
    const double hz = h.at(geodesic_point(M, x, y, s));
    if (!(fx > 0)) continue;
    if (lower) {
      const double target = pmean(s, Exponent::lower_endpoint(n), wf * fx, wg * gy);
      const double r = target > 0 ? std::fabs(hz / target - 1.0) : 1.0;
      sf += cp.mass * r;
      sg += cp.mass * r;
    } else {
      const double rh = hz / std::pow(Mq, e);
      const double rf = wf * fx / std::pow(mf, e);
      const double rg = wg * gy / std::pow(mg, e);
      sf += cp.mass * std::fabs(rh / rf - 1.0);
      sg += cp.mass * (rg > 0 ? std::fabs(rh / rg - 1.0) : 1.0);
    }
    w += cp.mass;
  }
  out.ratio_f = w > 0 ? sf / w : kInf;
  out.ratio_g = w > 0 ? sg / w : kInf;
  out.mass_balance = lower ? std::fabs(mg / mf - 1.0) : 0.0;
  return out;
}

HolderIntegral holder_integral_check(const GridDensity& f1, const GridDensity& f2, double s, int n) {
  require_shared(f1, f2);
  if (n <= 0) throw DomainError("dimension must be positive");
  const Grid& G = f1.grid();
  const double e = 1.0 / n;
  std::vector<double> mv(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) mv[i] = pmean(s, e, f1.value(i), f2.value(i));
  const GridDensity m(f1.grid_ptr(), std::move(mv));
  HolderIntegral r;
  r.lhs = m.mass();
  r.rhs = pmean(s, e, f1.mass(), f2.mass());
  r.slack = r.rhs - r.lhs;
  r.quadrature_error = G.h() * (total_variation(m) + total_variation(f1) + total_variation(f2));
  r.pass = r.slack >= -(r.quadrature_error + mixed_tol(r.rhs));
  if (f1.mass() > 0) {
    r.fitted_c = f2.mass() / f1.mass();
    double dev = 0;
    for (std::size_t i = 0; i < G.size(); ++i) dev = std::max(dev, std::fabs(f2.value(i) - r.fitted_c * f1.value(i)));
    r.equality = r.fitted_c > 0 && dev <= 1e-9 * std::max(1.0, f2.max_value());
  }
  return r;
}

}  // namespace bbl
