#include "bbl/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bbl/errors.hpp"
#include "bbl/pmeans.hpp"

namespace bbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cloud(const WeightedCloud& c, const char* name) {
  if (c.points.size() != c.masses.size())
    throw DomainError(std::string(name) + ": points and masses differ in length");
  if (c.points.empty()) throw DomainError(std::string(name) + ": empty cloud");
  for (double m : c.masses)
    if (!(m >= 0) || !std::isfinite(m)) throw DomainError(std::string(name) + ": masses must be nonnegative");
  const double t = c.total_mass();
  if (std::fabs(t - 1.0) > 1e-12 * c.size() + 1e-12)
    throw DomainError(std::string(name) + ": masses must sum to one");
}

// indices kept after pruning and their renormalized masses
struct Pruned {
  std::vector<std::size_t> idx;
  std::vector<double> mass;
};

Pruned prune(const WeightedCloud& c) {
  Pruned p;
  double total = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.masses[i] >= kPruneMass) {
      p.idx.push_back(i);
      p.mass.push_back(c.masses[i]);
      total += c.masses[i];
    }
  if (p.idx.empty()) throw DomainError("cloud has no mass above the pruning threshold");
  for (auto& m : p.mass) m /= total;
  return p;
}

double half_sq_dist(const ModelSpace& M, const Point& x, const Point& y) {
  const double d = distance(M, x, y);
  return 0.5 * d * d;
}

double log_sum_exp(const double* v, std::size_t n, std::size_t stride = 1) {
  double mx = -kInf;
  for (std::size_t k = 0; k < n; ++k) mx = std::max(mx, v[k * stride]);
  if (mx == -kInf) return -kInf;
  double s = 0;
  for (std::size_t k = 0; k < n; ++k) s += std::exp(v[k * stride] - mx);
  return mx + std::log(s);
}

// Transportation simplex over a spanning-tree basis.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& a, const std::vector<double>& b, std::vector<double> cost)
      : m_(a.size()), n_(b.size()), a_(a), b_(b), c_(std::move(cost)) {}

  void run() {
    northwest_corner();
    const std::size_t N = m_ + n_;
    u_.assign(N, 0);
    parent_arc_.assign(N, -1);
    adj_.assign(N, {});
    for (std::size_t k = 0; k < arcs_.size(); ++k) link(k);
    double cmax = 0;
    for (double c : c_) cmax = std::max(cmax, std::fabs(c));
    const double eps = 1e-14 * std::max(1.0, cmax);
    const std::size_t total = m_ * n_;
    const std::size_t block = std::max<std::size_t>(std::sqrt(static_cast<double>(total)), 10);
    std::size_t cursor = 0;
    const std::size_t max_pivots = 100 * total + 1000;
    for (std::size_t it = 0;; ++it) {
      if (it > max_pivots) throw DomainError("transport simplex did not terminate");
      compute_potentials(0);
      // block pricing, fixed cyclic order
      std::size_t best = total;
      double best_rc = -eps;
      std::size_t scanned = 0;
      while (scanned < total) {
        const std::size_t stop = std::min(total, scanned + block);
        for (; scanned < stop; ++scanned) {
          const std::size_t e = (cursor + scanned) % total;
          const std::size_t i = e / n_, j = e % n_;
          const double rc = c_[e] - u_[i] - u_[m_ + j];
          if (rc < best_rc) {
            best_rc = rc;
            best = e;
          }
        }
        if (best != total) break;
      }
      if (best == total) break;
      cursor = (best + 1) % total;
      pivot(best / n_, best % n_);
    }
  }

  struct Arc {
    std::size_t i, j;
    double x;
  };
  const std::vector<Arc>& arcs() const { return arcs_; }

 private:
  void northwest_corner() {
    std::vector<double> ra = a_, rb = b_;
    std::size_t i = 0, j = 0;
    while (true) {
      const double x = std::min(ra[i], rb[j]);
      arcs_.push_back({i, j, x});
      ra[i] -= x;
      rb[j] -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1 || (i < m_ - 1 && ra[i] <= rb[j])) {
        ++i;
      } else {
        ++j;
      }
    }
    for (auto& arc : arcs_)
      if (arc.x < 0) arc.x = 0;
  }

  void link(std::size_t k) {
    adj_[arcs_[k].i].push_back(static_cast<int>(k));
    adj_[m_ + arcs_[k].j].push_back(static_cast<int>(k));
  }
  void unlink(std::size_t k) {
    for (std::size_t node : {arcs_[k].i, m_ + arcs_[k].j}) {
      auto& v = adj_[node];
      v.erase(std::find(v.begin(), v.end(), static_cast<int>(k)));
    }
  }
  std::size_t other(std::size_t k, std::size_t node) const {
    return node < m_ ? m_ + arcs_[k].j : arcs_[k].i;
  }

  // potentials with u[root] = 0; records the tree path to the root
  void compute_potentials(std::size_t root) {
    std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
    stack_.clear();
    stack_.push_back(root);
    u_[root] = 0;
    parent_arc_[root] = -2;
    while (!stack_.empty()) {
      const std::size_t v = stack_.back();
      stack_.pop_back();
      for (int k : adj_[v]) {
        const std::size_t w = other(k, v);
        if (parent_arc_[w] != -1) continue;
        parent_arc_[w] = k;
        const double c = c_[arcs_[k].i * n_ + arcs_[k].j];
        u_[w] = c - u_[v];
        stack_.push_back(w);
      }
    }
  }

  void pivot(std::size_t ei, std::size_t ej) {
    compute_potentials(ei);
    // path from column ej back to row ei
    std::vector<int> path;
    std::size_t v = m_ + ej;
    while (v != ei) {
      const int k = parent_arc_[v];
      path.push_back(k);
      v = other(k, v);
    }
    // signs alternate starting with minus at the arc touching ej
    std::size_t leave = path.size();
    double theta = kInf;
    for (std::size_t q = 0; q < path.size(); q += 2) {
      const double x = arcs_[path[q]].x;
      if (x < theta) {
        theta = x;
        leave = q;
      }
    }
    for (std::size_t q = 0; q < path.size(); ++q) {
      auto& arc = arcs_[path[q]];
      arc.x += (q % 2 == 0) ? -theta : theta;
      if (arc.x < 0) arc.x = 0;
    }
    const std::size_t k = static_cast<std::size_t>(path[leave]);
    unlink(k);
    arcs_[k] = {ei, ej, theta};
    arcs_[k].x = theta;
    link(k);
  }

  std::size_t m_, n_;
  std::vector<double> a_, b_, c_;
  std::vector<Arc> arcs_;
  std::vector<double> u_;
  std::vector<int> parent_arc_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::size_t> stack_;
};

TransportPlan assemble(const WeightedCloud& mu, const WeightedCloud& nu, std::vector<Coupling> cps) {
  TransportPlan plan;
  plan.source = mu;
  plan.target = nu;
  std::sort(cps.begin(), cps.end(), [](const Coupling& x, const Coupling& y) {
    return x.i != y.i ? x.i < y.i : x.j < y.j;
  });
  plan.couplings = std::move(cps);
  plan.cost = plan.recomputed_cost();
  return plan;
}

}  // namespace

double WeightedCloud::total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

WeightedCloud normalized(WeightedCloud c) {
  const double t = c.total_mass();
  if (!(t > 0)) throw DomainError("cloud has no mass");
  for (auto& m : c.masses) m /= t;
  return c;
}

WeightedCloud uniform_cloud(const ModelSpace& M, std::vector<Point> pts) {
  WeightedCloud c;
  c.space = M;
  c.masses.assign(pts.size(), pts.empty() ? 0.0 : 1.0 / pts.size());
  c.points = std::move(pts);
  return c;
}

WeightedCloud indicator_cloud(const DiscreteSet& A) {
  WeightedCloud c;
  c.space = A.space();
  for (auto i : A.cells()) {
    c.points.push_back(A.grid().center(i));
    c.masses.push_back(A.grid().volume(i));
  }
  return normalized(std::move(c));
}

double TransportPlan::recomputed_cost() const {
  double s = 0;
  for (const auto& cp : couplings)
    s += cp.mass * half_sq_dist(source.space, source.points[cp.i], target.points[cp.j]);
  return s;
}

double TransportPlan::marginal_violation() const {
  std::vector<double> r(source.size(), 0.0), c(target.size(), 0.0);
  for (const auto& cp : couplings) {
    r[cp.i] += cp.mass;
    c[cp.j] += cp.mass;
  }
  double v = 0;
  for (std::size_t i = 0; i < r.size(); ++i) v = std::max(v, std::fabs(r[i] - source.masses[i]));
  for (std::size_t j = 0; j < c.size(); ++j) v = std::max(v, std::fabs(c[j] - target.masses[j]));
  return v;
}

TransportPlan solve_exact(const WeightedCloud& mu, const WeightedCloud& nu) {
  check_cloud(mu, "source");
  check_cloud(nu, "target");
  if (!(mu.space == nu.space)) throw DomainError("clouds live on different spaces");
  if (static_cast<double>(mu.size()) * static_cast<double>(nu.size()) > kMaxExactPairs)
    throw DomainError("exact solver is capped at 1e6 point pairs; use the entropic solver");
  const Pruned P = prune(mu), Q = prune(nu);
  const std::size_t m = P.idx.size(), n = Q.idx.size();
  std::vector<double> cost(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cost[i * n + j] = half_sq_dist(mu.space, mu.points[P.idx[i]], nu.points[Q.idx[j]]);
  TransportSimplex solver(P.mass, Q.mass, std::move(cost));
  solver.run();
  std::vector<Coupling> cps;
  for (const auto& arc : solver.arcs())
    if (arc.x > 0) cps.push_back({P.idx[arc.i], Q.idx[arc.j], arc.x});
  return assemble(mu, nu, std::move(cps));
}

EntropicResult solve_entropic(const WeightedCloud& mu, const WeightedCloud& nu, const SinkhornOptions& opt) {
  check_cloud(mu, "source");
  check_cloud(nu, "target");
  if (!(opt.epsilon > 0)) throw DomainError("epsilon must be positive");
  if (!(mu.space == nu.space)) throw DomainError("clouds live on different spaces");
  const Pruned P = prune(mu), Q = prune(nu);
  const std::size_t m = P.idx.size(), n = Q.idx.size();
  std::vector<double> C(m * n);
  double cmax = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      C[i * n + j] = half_sq_dist(mu.space, mu.points[P.idx[i]], nu.points[Q.idx[j]]);
      cmax = std::max(cmax, C[i * n + j]);
    }
  std::vector<double> la(m), lb(n);
  for (std::size_t i = 0; i < m; ++i) la[i] = std::log(P.mass[i]);
  for (std::size_t j = 0; j < n; ++j) lb[j] = std::log(Q.mass[j]);
  std::vector<double> f(m, 0.0), g(n, 0.0), buf(std::max(m, n));
  SinkhornReport rep;
  double eps = opt.scaling ? std::max(opt.epsilon, cmax) : opt.epsilon;
  auto sweep = [&](double e) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) buf[j] = lb[j] + (g[j] - C[i * n + j]) / e;
      f[i] = -e * log_sum_exp(buf.data(), n);
    }
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) buf[i] = la[i] + (f[i] - C[i * n + j]) / e;
      g[j] = -e * log_sum_exp(buf.data(), m);
    }
  };
  auto violation = [&](double e) {
    double v = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) buf[j] = lb[j] + (g[j] - C[i * n + j] + f[i]) / e;
      v += std::fabs(std::exp(la[i] + log_sum_exp(buf.data(), n)) - P.mass[i]);
    }
    return v;
  };
  while (eps > opt.epsilon) {
    for (int k = 0; k < 10; ++k) sweep(eps);
    rep.iterations += 10;
    eps = std::max(opt.epsilon, eps * 0.5);
  }
  while (rep.iterations < opt.max_iter) {
    sweep(opt.epsilon);
    ++rep.iterations;
    if (rep.iterations % 10 == 0 || rep.iterations >= opt.max_iter) {
      rep.marginal_violation = violation(opt.epsilon);
      if (rep.marginal_violation <= opt.tol) {
        rep.converged = true;
        break;
      }
    }
  }
  if (!rep.converged) rep.marginal_violation = violation(opt.epsilon);
  rep.epsilon = opt.epsilon;
  std::vector<Coupling> cps;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = std::exp(la[i] + lb[j] + (f[i] + g[j] - C[i * n + j]) / opt.epsilon);
      if (x > opt.keep_threshold) cps.push_back({P.idx[i], Q.idx[j], x});
    }
  return {assemble(mu, nu, std::move(cps)), rep};
}

EntropicResult solve_entropic_grid(const Grid& G, const std::vector<double>& mu, const std::vector<double>& nu,
                                   const SinkhornOptions& opt) {
  if (G.chart() != Grid::Chart::tensor) throw UnsupportedError("separable Sinkhorn needs a euclidean grid");
  if (mu.size() != G.size() || nu.size() != G.size()) throw DomainError("masses must be given per grid cell");
  if (!(opt.epsilon > 0)) throw DomainError("epsilon must be positive");
  const int D = G.space().n();
  const auto& cnt = G.counts();
  const std::size_t N = G.size();
  const double h = G.h();
  auto normalize_masses = [&](const std::vector<double>& w) {
    std::vector<double> out(N, 0.0);
    double t = 0;
    for (std::size_t i = 0; i < N; ++i)
      if (w[i] >= kPruneMass) {
        out[i] = w[i];
        t += w[i];
      }
    if (!(t > 0)) throw DomainError("grid measure has no mass");
    for (auto& x : out) x /= t;
    return out;
  };
  const std::vector<double> a = normalize_masses(mu), b = normalize_masses(nu);
  std::vector<double> la(N), lb(N);
  for (std::size_t i = 0; i < N; ++i) {
    la[i] = a[i] > 0 ? std::log(a[i]) : -kInf;
    lb[i] = b[i] > 0 ? std::log(b[i]) : -kInf;
  }
  // 1-D cost tables along each axis
  std::vector<std::vector<double>> C1(D);
  double cmax = 0;
  for (int d = 0; d < D; ++d) {
    const int L = cnt[d];
    C1[d].resize(static_cast<std::size_t>(L) * L);
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) C1[d][i * L + j] = 0.5 * (i - j) * (i - j) * h * h;
    cmax += 0.5 * (L - 1) * (L - 1) * h * h;
  }
  std::vector<double> f(N, 0.0), g(N, 0.0), work(N), tmp(N), line(std::max({cnt[0], cnt[1], cnt[2]}));
  // out_i = -e * log sum_j exp(w_j - C(i,j)/e), applied axis by axis
  auto softmin = [&](const std::vector<double>& w, std::vector<double>& out, double e) {
    work = w;
    std::size_t stride = 1;
    for (int d = 0; d < D; ++d) {
      const int L = cnt[d];
      for (std::size_t base = 0; base < N; ++base) {
        if ((base / stride) % L != 0) continue;
        for (int i = 0; i < L; ++i) {
          for (int j = 0; j < L; ++j) line[j] = work[base + j * stride] - C1[d][i * L + j] / e;
          tmp[base + i * stride] = log_sum_exp(line.data(), L);
        }
      }
      work.swap(tmp);
      stride *= L;
    }
    for (std::size_t i = 0; i < N; ++i) out[i] = -e * work[i];
  };
  std::vector<double> w(N), r(N);
  auto sweep = [&](double e) {
    for (std::size_t j = 0; j < N; ++j) w[j] = lb[j] + g[j] / e;
    softmin(w, f, e);
    for (std::size_t i = 0; i < N; ++i) w[i] = la[i] + f[i] / e;
    softmin(w, g, e);
  };
  auto violation = [&](double e) {
    for (std::size_t j = 0; j < N; ++j) w[j] = lb[j] + g[j] / e;
    softmin(w, r, e);
    double v = 0;
    for (std::size_t i = 0; i < N; ++i)
      if (a[i] > 0) v += std::fabs(a[i] * std::exp((f[i] - r[i]) / e) - a[i]);
    return v;
  };
  SinkhornReport rep;
  double eps = opt.scaling ? std::max(opt.epsilon, cmax) : opt.epsilon;
  while (eps > opt.epsilon) {
    for (int k = 0; k < 10; ++k) sweep(eps);
    rep.iterations += 10;
    eps = std::max(opt.epsilon, eps * 0.5);
  }
  while (rep.iterations < opt.max_iter) {
    sweep(opt.epsilon);
    ++rep.iterations;
    if (rep.iterations % 10 == 0 || rep.iterations >= opt.max_iter) {
      rep.marginal_violation = violation(opt.epsilon);
      if (rep.marginal_violation <= opt.tol) {
        rep.converged = true;
        break;
      }
    }
  }
  if (!rep.converged) rep.marginal_violation = violation(opt.epsilon);
  rep.epsilon = opt.epsilon;
  // materialize the plan between the supports
  WeightedCloud src, dst;
  src.space = dst.space = G.space();
  std::vector<std::size_t> si, tj;
  for (std::size_t i = 0; i < N; ++i) {
    if (a[i] > 0) si.push_back(i);
    if (b[i] > 0) tj.push_back(i);
  }
  for (auto i : si) {
    src.points.push_back(G.center(i));
    src.masses.push_back(a[i]);
  }
  for (auto j : tj) {
    dst.points.push_back(G.center(j));
    dst.masses.push_back(b[j]);
  }
  std::vector<Coupling> cps;
  for (std::size_t p = 0; p < si.size(); ++p) {
    const auto mi = G.unravel(si[p]);
    for (std::size_t q = 0; q < tj.size(); ++q) {
      const auto mj = G.unravel(tj[q]);
      double c = 0;
      for (int d = 0; d < D; ++d) c += C1[d][mi[d] * cnt[d] + mj[d]];
      const double x = std::exp(la[si[p]] + lb[tj[q]] + (f[si[p]] + g[tj[q]] - c) / opt.epsilon);
      if (x > opt.keep_threshold) cps.push_back({p, q, x});
    }
  }
  return {assemble(src, dst, std::move(cps)), rep};
}

WeightedCloud displacement_interpolate(const TransportPlan& plan, double s) {
  if (!(s >= 0 && s <= 1)) throw DomainError("interpolation weight must lie in [0,1]");
  WeightedCloud out;
  out.space = plan.source.space;
  for (const auto& cp : plan.couplings) {
    const Point& x = plan.source.points[cp.i];
    const Point& y = plan.target.points[cp.j];
    if (is_cut_locus_pair(out.space, x, y)) throw CutLocusError("plan couples a cut-locus pair");
    out.points.push_back(geodesic_point(out.space, x, y, s));
    out.masses.push_back(cp.mass);
  }
  return out;
}

std::vector<Point> barycentric_map(const TransportPlan& plan) {
  const std::size_t m = plan.source.size();
  const int D = plan.source.space.ambient_dim();
  std::vector<Point> out(m);
  std::vector<double> w(m, 0.0);
  std::vector<long> unique_target(m, -1);
  for (auto& p : out) p.dim = D;
  const bool flat = plan.source.space.kind() == SpaceKind::euclidean;
  for (const auto& cp : plan.couplings) {
    if (flat) {
      for (int d = 0; d < D; ++d) out[cp.i][d] += cp.mass * plan.target.points[cp.j][d];
    } else {
      if (unique_target[cp.i] >= 0 && unique_target[cp.i] != static_cast<long>(cp.j))
        throw UnsupportedError("curved-space barycentric map needs unsplit rows");
      unique_target[cp.i] = static_cast<long>(cp.j);
      out[cp.i] = plan.target.points[cp.j];
    }
    w[cp.i] += cp.mass;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (w[i] == 0) {
      out[i] = plan.source.points[i];  // pruned row: stays put
      continue;
    }
    if (flat)
      for (int d = 0; d < D; ++d) out[i][d] /= w[i];
  }
  return out;
}

double split_mass_fraction(const TransportPlan& plan) {
  std::vector<int> count(plan.source.size(), 0);
  for (const auto& cp : plan.couplings) ++count[cp.i];
  double split = 0, total = 0;
  for (std::size_t i = 0; i < count.size(); ++i) {
    total += plan.source.masses[i];
    if (count[i] > 1) split += plan.source.masses[i];
  }
  return total > 0 ? split / total : 0.0;
}

WassersteinBounds wasserstein_bounds_check(const TransportPlan& plan, const DiscreteSet& A, const DiscreteSet& B,
                                           double k) {
  (void)k;  // both extrema are needed regardless of the curvature sign
  WassersteinBounds w;
  w.theta_min = theta(A, B, 0.0);
  w.theta_max = theta(A, B, -1.0);
  w.w = 2.0 * plan.cost;
  const double lo = w.theta_min * w.theta_min, hi = w.theta_max * w.theta_max;
  const double tol = mixed_tol(hi);
  w.holds = w.w >= lo - tol && w.w <= hi + tol;
  w.strict_lower = w.w > lo + tol;
  w.strict_upper = w.w < hi - tol;
  return w;
}

}  // namespace bbl
