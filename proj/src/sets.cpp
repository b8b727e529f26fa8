#include "bbl/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bbl/errors.hpp"

namespace bbl {

namespace {

void require_grid(const DiscreteSet& A, const char* what) {
  if (!A.is_grid()) throw UnsupportedError(std::string(what) + " needs a grid-mask set");
}

void require_same_grid(const DiscreteSet& A, const DiscreteSet& B) {
  require_grid(A, "this operation");
  require_grid(B, "this operation");
  if (A.grid_ptr() != B.grid_ptr() && !A.grid().same_layout(B.grid()))
    throw DomainError("sets live on different grids");
}

std::string describe(const Point& x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < x.dim; ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

DiscreteSet DiscreteSet::from_mask(GridPtr grid, std::vector<std::uint8_t> mask) {
  if (!grid) throw DomainError("null grid");
  if (mask.size() != grid->size()) throw DomainError("mask size does not match the grid");
  DiscreteSet S;
  S.space_ = grid->space();
  S.resolution_ = grid->h();
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = mask[i] ? 1 : 0;
    if (mask[i]) S.cells_.push_back(i);
  }
  S.mask_ = std::move(mask);
  S.grid_ = std::move(grid);
  return S;
}

DiscreteSet DiscreteSet::from_cells(GridPtr grid, std::vector<std::size_t> cells) {
  if (!grid) throw DomainError("null grid");
  std::vector<std::uint8_t> mask(grid->size(), 0);
  for (auto c : cells) {
    if (c >= grid->size()) throw DomainError("cell index outside the grid");
    mask[c] = 1;
  }
  return from_mask(std::move(grid), std::move(mask));
}

DiscreteSet DiscreteSet::cloud(const ModelSpace& M, std::vector<Point> points, double resolution) {
  if (!(resolution > 0)) throw DomainError("resolution must be positive");
  for (const auto& p : points)
    if (!M.contains(p, 1e-9)) throw DomainError("cloud point " + describe(p) + " is not on the space");
  DiscreteSet S;
  S.space_ = M;
  S.points_ = std::move(points);
  S.resolution_ = resolution;
  return S;
}

const Grid& DiscreteSet::grid() const {
  if (!grid_) throw UnsupportedError("point-cloud set has no grid");
  return *grid_;
}

Point DiscreteSet::point(std::size_t k) const {
  return is_grid() ? grid_->center(cells_[k]) : points_[k];
}

std::vector<Point> DiscreteSet::points() const {
  if (!is_grid()) return points_;
  std::vector<Point> out;
  out.reserve(cells_.size());
  for (auto c : cells_) out.push_back(grid_->center(c));
  return out;
}

DiscreteSet box_set(const GridPtr& grid, const std::vector<double>& lo, const std::vector<double>& hi) {
  if (grid->space().kind() != SpaceKind::euclidean) throw UnsupportedError("boxes need a euclidean grid");
  const int n = grid->space().n();
  if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
    throw DomainError("box corners must match the dimension");
  std::vector<std::uint8_t> mask(grid->size(), 0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Point& x = grid->center(i);
    bool in = true;
    for (int d = 0; d < n && in; ++d) in = x[d] >= lo[d] && x[d] <= hi[d];
    mask[i] = in;
  }
  return DiscreteSet::from_mask(grid, std::move(mask));
}

DiscreteSet ball_set(const GridPtr& grid, const Point& center, double r) {
  std::vector<std::uint8_t> mask(grid->size(), 0);
  for (std::size_t i = 0; i < grid->size(); ++i)
    mask[i] = distance(grid->space(), grid->center(i), center) <= r;
  return DiscreteSet::from_mask(grid, std::move(mask));
}

DiscreteSet polygon_set(const GridPtr& grid, const Polygon& P) {
  if (grid->space().kind() != SpaceKind::euclidean || grid->space().n() != 2)
    throw UnsupportedError("polygons need a planar euclidean grid");
  std::vector<std::uint8_t> mask(grid->size(), 0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Point& x = grid->center(i);
    mask[i] = contains(P, {x[0], x[1]});
  }
  return DiscreteSet::from_mask(grid, std::move(mask));
}

DiscreteSet set_union(const DiscreteSet& A, const DiscreteSet& B) {
  require_same_grid(A, B);
  std::vector<std::uint8_t> mask = A.mask();
  for (auto c : B.cells()) mask[c] = 1;
  return DiscreteSet::from_mask(A.grid_ptr(), std::move(mask));
}

DiscreteSet dilate(const DiscreteSet& A, int cells) {
  require_grid(A, "dilation");
  std::vector<std::uint8_t> mask = A.mask();
  std::vector<std::size_t> nb;
  std::vector<std::size_t> frontier = A.cells();
  for (int it = 0; it < cells; ++it) {
    std::vector<std::size_t> next;
    for (auto c : frontier) {
      A.grid().neighbors(c, nb);
      for (auto q : nb)
        if (!mask[q]) {
          mask[q] = 1;
          next.push_back(q);
        }
    }
    frontier.swap(next);
  }
  return DiscreteSet::from_mask(A.grid_ptr(), std::move(mask));
}

bool is_subset(const DiscreteSet& A, const DiscreteSet& B) {
  require_same_grid(A, B);
  for (auto c : A.cells())
    if (!B.has_cell(c)) return false;
  return true;
}

DiscreteSet interpolation_set(const DiscreteSet& A, const DiscreteSet& B, double s, bool outer_dilation) {
  if (!(s > 0 && s < 1)) throw DomainError("interpolation weight must lie in (0,1)");
  if (!(A.space() == B.space())) throw DomainError("sets live on different spaces");
  const DiscreteSet& host = A.is_grid() ? A : B;
  require_grid(host, "interpolation");
  if (A.is_grid() && B.is_grid()) require_same_grid(A, B);
  if (static_cast<double>(A.size()) * static_cast<double>(B.size()) > kMaxInterpolationPairs)
    throw DomainError("interpolation instance exceeds " + std::to_string(kMaxInterpolationPairs) +
                      " pairs; coarsen the grid");
  const Grid& G = host.grid();
  const ModelSpace& M = A.space();
  const auto PA = A.points();
  const auto PB = B.points();
  std::vector<std::uint8_t> mask(G.size(), 0);
  for (std::size_t i = 0; i < PA.size(); ++i)
    for (std::size_t j = 0; j < PB.size(); ++j) {
      if (is_cut_locus_pair(M, PA[i], PB[j]))
        throw CutLocusError("cut-locus pair A[" + std::to_string(i) + "]=" + describe(PA[i]) + ", B[" +
                            std::to_string(j) + "]=" + describe(PB[j]));
      const Point z = geodesic_point(M, PA[i], PB[j], s);
      const long c = G.locate(z);
      if (c < 0) throw DomainError("interpolant " + describe(z) + " falls outside the grid");
      mask[static_cast<std::size_t>(c)] = 1;
    }
  DiscreteSet Z = DiscreteSet::from_mask(host.grid_ptr(), std::move(mask));
  return outer_dilation ? dilate(Z, 1) : Z;
}

Measure measure(const DiscreteSet& A) {
  require_grid(A, "measure");
  const Grid& G = A.grid();
  Measure m;
  std::vector<std::size_t> nb;
  std::vector<std::uint8_t> rim(G.size(), 0);
  for (auto c : A.cells()) {
    const double v = G.volume(c);
    m.value += v;
    G.neighbors(c, nb);
    bool interior = true;
    for (auto q : nb)
      if (!A.has_cell(q)) {
        interior = false;
        rim[q] = 1;
      }
    // cells on the grid boundary count as boundary cells
    const std::size_t full = G.index_dims() == 1 ? 2 : (G.index_dims() == 2 ? 8 : 26);
    if (G.chart() == Grid::Chart::tensor && nb.size() < full) interior = false;
    if (interior) m.inner += v;
  }
  m.outer = m.value;
  for (std::size_t q = 0; q < rim.size(); ++q)
    if (rim[q]) m.outer += G.volume(q);
  return m;
}

double theta(const DiscreteSet& A, const DiscreteSet& B, double k) {
  if (A.empty() || B.empty()) throw DomainError("theta needs nonempty sets");
  const auto PA = A.points();
  const auto PB = B.points();
  const ModelSpace& M = A.space();
  double best = k >= 0 ? std::numeric_limits<double>::infinity() : 0.0;
  for (const auto& x : PA)
    for (const auto& y : PB) {
      const double d = distance(M, x, y);
      best = k >= 0 ? std::min(best, d) : std::max(best, d);
    }
  return best;
}

std::vector<double> centroid(const DiscreteSet& A) {
  require_grid(A, "centroid");
  const Grid& G = A.grid();
  const int D = G.space().ambient_dim();
  std::vector<double> c(D, 0.0);
  double w = 0;
  for (auto i : A.cells()) {
    const double v = G.volume(i);
    for (int d = 0; d < D; ++d) c[d] += v * G.center(i)[d];
    w += v;
  }
  if (w == 0) throw DomainError("centroid of an empty set");
  for (auto& x : c) x /= w;
  return c;
}

HomothetyFit homothety_fit(const DiscreteSet& A, const DiscreteSet& B) {
  require_grid(A, "homothety fit");
  require_grid(B, "homothety fit");
  if (A.space().kind() != SpaceKind::euclidean || !(A.space() == B.space()))
    throw UnsupportedError("homothety fit needs euclidean sets");
  const double mA = measure(A).value, mB = measure(B).value;
  if (mA == 0 || mB == 0) throw DomainError("homothety fit needs sets of positive measure");
  const int n = A.space().n();
  HomothetyFit fit;
  fit.c0 = std::pow(mB / mA, 1.0 / n);
  const auto cA = centroid(A), cB = centroid(B);
  fit.x0.resize(n);
  for (int d = 0; d < n; ++d) fit.x0[d] = cB[d] - fit.c0 * cA[d];
  const Grid& GA = A.grid();
  const Grid& GB = B.grid();
  double miss = 0;
  for (auto j : B.cells()) {
    Point y = GB.center(j);
    for (int d = 0; d < n; ++d) y[d] = (y[d] - fit.x0[d]) / fit.c0;
    const long c = GA.locate(y);
    if (c < 0 || !A.has_cell(static_cast<std::size_t>(c))) miss += GB.volume(j);
  }
  const double cn = std::pow(fit.c0, n);
  for (auto i : A.cells()) {
    Point x = GA.center(i);
    for (int d = 0; d < n; ++d) x[d] = fit.c0 * x[d] + fit.x0[d];
    const long c = GB.locate(x);
    if (c < 0 || !B.has_cell(static_cast<std::size_t>(c))) miss += cn * GA.volume(i);
  }
  fit.residual = miss / mB;
  fit.homothetic = fit.residual <= 8 * std::max(GA.h(), GB.h());
  return fit;
}

double convexity_residual(const DiscreteSet& A) {
  require_grid(A, "convexity residual");
  const Grid& G = A.grid();
  if (G.chart() != Grid::Chart::tensor) throw UnsupportedError("convexity residual needs a euclidean grid");
  if (A.empty()) return 0.0;
  const int n = G.space().n();
  double missing = 0;
  if (n == 1) {
    const std::size_t lo = A.cells().front(), hi = A.cells().back();
    for (std::size_t i = lo; i <= hi; ++i)
      if (!A.has_cell(i)) missing += G.volume(i);
  } else if (n == 2) {
    std::vector<Vec2> pts;
    pts.reserve(A.size());
    for (auto c : A.cells()) pts.push_back({G.center(c)[0], G.center(c)[1]});
    const Polygon H = convex_hull(pts);
    if (H.v.size() < 3) return 0.0;
    const double eps = 1e-9 * G.h() * G.h();
    int i0 = G.counts()[0], i1 = 0, j0 = G.counts()[1], j1 = 0;
    for (auto c : A.cells()) {
      const auto m = G.unravel(c);
      i0 = std::min(i0, m[0]);
      i1 = std::max(i1, m[0]);
      j0 = std::min(j0, m[1]);
      j1 = std::max(j1, m[1]);
    }
    const std::size_t mH = H.v.size();
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const std::size_t c = G.ravel({i, j, 0});
        if (A.has_cell(c)) continue;
        const Point& x = G.center(c);
        bool in = true;
        for (std::size_t e = 0; e < mH && in; ++e) {
          const Vec2& a = H.v[e];
          const Vec2& b = H.v[(e + 1) % mH];
          in = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) >= -eps;
        }
        if (in) missing += G.volume(c);
      }
  } else {
    throw UnsupportedError("convexity residual is implemented for n = 1, 2");
  }
  return missing / measure(A).value;
}

}  // namespace bbl
