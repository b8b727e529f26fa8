#pragma once

#include <cstdint>
#include <vector>

#include "bbl/grid.hpp"
#include "bbl/polygon.hpp"

namespace bbl {

// Either a mask over a grid or a bare point cloud.
class DiscreteSet {
 public:
  DiscreteSet() = default;
  static DiscreteSet from_mask(GridPtr grid, std::vector<std::uint8_t> mask);
  static DiscreteSet from_cells(GridPtr grid, std::vector<std::size_t> cells);
  static DiscreteSet cloud(const ModelSpace& M, std::vector<Point> points, double resolution);

  bool is_grid() const { return grid_ != nullptr; }
  const Grid& grid() const;
  const GridPtr& grid_ptr() const { return grid_; }
  const ModelSpace& space() const { return space_; }
  double resolution() const { return resolution_; }

  std::size_t size() const { return is_grid() ? cells_.size() : points_.size(); }
  bool empty() const { return size() == 0; }
  const std::vector<std::size_t>& cells() const { return cells_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  bool has_cell(std::size_t i) const { return mask_[i] != 0; }
  Point point(std::size_t k) const;
  std::vector<Point> points() const;

 private:
  ModelSpace space_;
  GridPtr grid_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> cells_;
  std::vector<Point> points_;
  double resolution_ = 0;
};

// Rasterizers: a cell belongs to the set when its center does.
DiscreteSet box_set(const GridPtr& grid, const std::vector<double>& lo, const std::vector<double>& hi);
DiscreteSet ball_set(const GridPtr& grid, const Point& center, double r);
DiscreteSet polygon_set(const GridPtr& grid, const Polygon& P);
DiscreteSet set_union(const DiscreteSet& A, const DiscreteSet& B);
DiscreteSet dilate(const DiscreteSet& A, int cells = 1);
bool is_subset(const DiscreteSet& A, const DiscreteSet& B);

inline constexpr double kMaxInterpolationPairs = 4e7;

// Z_s(A,B): snapped geodesic interpolants plus a one-cell outer dilation.
DiscreteSet interpolation_set(const DiscreteSet& A, const DiscreteSet& B, double s,
                              bool outer_dilation = true);

struct Measure {
  double value = 0;  // cell count x cell volume
  double inner = 0;  // cells whose whole neighbourhood lies in the set
  double outer = 0;  // set plus adjacent cells
};

Measure measure(const DiscreteSet& A);

// inf (k >= 0) or sup (k < 0) of pairwise distances
double theta(const DiscreteSet& A, const DiscreteSet& B, double k);

struct HomothetyFit {
  double c0 = 1;
  std::vector<double> x0;
  double residual = 0;
  bool homothetic = false;  // residual <= 8h
};

HomothetyFit homothety_fit(const DiscreteSet& A, const DiscreteSet& B);

std::vector<double> centroid(const DiscreteSet& A);

// measure(hull(A) \ A) / measure(A)
double convexity_residual(const DiscreteSet& A);

}  // namespace bbl
