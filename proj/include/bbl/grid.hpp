#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "bbl/modelspace.hpp"

namespace bbl {

// Regular cell decomposition of (a region of) a model space.
//   tensor:  axis-aligned cells of side h in R^n, n = 1..3
//   latlon:  colatitude/longitude cells covering all of S^2
//   polar:   geodesic polar cells covering a disc of H^2 about origin()
class Grid {
 public:
  enum class Chart { tensor, latlon, polar };

  static std::shared_ptr<const Grid> euclidean(int n, const std::array<double, 3>& origin, double h,
                                               const std::array<int, 3>& counts);
  static std::shared_ptr<const Grid> sphere(const ModelSpace& M, int n_theta, int n_phi);
  static std::shared_ptr<const Grid> hyperbolic_polar(const ModelSpace& M, double rho_max, int n_rho,
                                                      int n_phi);

  const ModelSpace& space() const { return space_; }
  Chart chart() const { return chart_; }
  std::size_t size() const { return centers_.size(); }
  int index_dims() const { return index_dims_; }
  const std::array<int, 3>& counts() const { return counts_; }
  const std::array<double, 3>& origin() const { return origin_; }
  // cell side for tensor grids; largest cell diameter for the curved charts
  double h() const { return h_; }
  // the two chart steps (radial/colatitude, angular) for curved charts
  double step0() const { return step0_; }
  double step1() const { return step1_; }
  double rho_max() const { return rho_max_; }

  const Point& center(std::size_t i) const { return centers_[i]; }
  double volume(std::size_t i) const { return volumes_[i]; }
  double total_volume() const;

  // cell index containing x, or -1 when x lies outside the grid
  long locate(const Point& x) const;

  std::array<int, 3> unravel(std::size_t i) const;
  std::size_t ravel(const std::array<int, 3>& m) const;

  // Chebyshev neighbours (longitude wraps around)
  void neighbors(std::size_t i, std::vector<std::size_t>& out) const;

  bool same_layout(const Grid& other) const;

 private:
  Grid() = default;
  void build();

  ModelSpace space_;
  Chart chart_ = Chart::tensor;
  int index_dims_ = 1;
  std::array<int, 3> counts_{1, 1, 1};
  std::array<double, 3> origin_{0, 0, 0};
  double h_ = 0;
  double step0_ = 0, step1_ = 0;
  double rho_max_ = 0;
  std::vector<Point> centers_;
  std::vector<double> volumes_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace bbl
