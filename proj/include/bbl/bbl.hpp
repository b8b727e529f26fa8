#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bbl/gap.hpp"
#include "bbl/grid.hpp"
#include "bbl/ot.hpp"
#include "bbl/pmeans.hpp"
#include "bbl/sets.hpp"

namespace bbl {

// Nonnegative function sampled per grid cell (piecewise constant).
class GridDensity {
 public:
  GridDensity() = default;
  GridDensity(GridPtr grid, std::vector<double> values);

  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }
  const ModelSpace& space() const { return grid_->space(); }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t cell) const { return values_[cell]; }
  double max_value() const;
  // value at the cell containing x; 0 outside the grid
  double at(const Point& x) const;
  double mass() const { return mass_; }

  // cells with value >= cut * max (cut = 1e-12 by default)
  DiscreteSet support(double cut = kSupportCut) const;
  // normalized masses value*volume/mass over the support cells, in cell order
  WeightedCloud normalized_cloud() const;
  GridDensity scaled(double factor) const;

  static constexpr double kSupportCut = 1e-12;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  double mass_ = 0;
};

GridDensity indicator(const DiscreteSet& A, double weight = 1.0);
GridDensity sample(const GridPtr& grid, const std::function<double(const Point&)>& fn);

// Total variation over cell faces (jumps to the outside included).
double total_variation(const GridDensity& u);

// (h + blur) * sum TV(u)/||u||_1; the fixed error model used by every report
double discretization_error(const std::vector<const GridDensity*>& fields, double blur = 0.0);

// ||h|| / M^{p/(1+pn)}(||f||, ||g||) - 1
double deficit(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s, const Exponent& p);

inline constexpr double kMaxAdmissiblePairs = 4e7;

// smallest grid h with h(z) >= M^p(f(x)/v_{1-s}(y,x), g(y)/v_s(x,y)) over snapped pairs
GridDensity admissible_h(const GridDensity& f, const GridDensity& g, double s, const Exponent& p);

// integral of f~ G(f/v, g/v, 1/||f||, 1/||g||) over the couplings of plan
double deficit_lower_bound(const GridDensity& f, const GridDensity& g, double s, const Exponent& p,
                           const TransportPlan& plan);

struct EqualityDiagnostics {
  double support = 0;   // |supp h  symdiff  psi_s(supp f)| / |supp h|
  double jacobian = 0;  // |m(psi_s(supp f)) / predicted - 1|
  double ratio = 0;     // mass-weighted three-way ratio mismatch
  double mass_balance = 0;  // | ||g||/||f|| - 1 |, only meaningful at p = -1/n
  bool lower_endpoint = false;
  double max_residual() const;
};

EqualityDiagnostics equality_diagnostics(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s,
                                         const Exponent& p, const TransportPlan& plan);

struct DeficitReport {
  double deficit = 0;
  double lower_bound = 0;
  double margin = 0;
  double discretization_error = 0;
  double h = 0;
  double calibrated_c = 0;  // discretization_error / h
  bool bound_holds = false; // margin >= -discretization_error
  std::optional<EqualityDiagnostics> diagnostics;
};

DeficitReport deficit_report(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s,
                             const Exponent& p, const TransportPlan& plan, double blur = 0.0,
                             bool with_diagnostics = false);

struct DubucTriple {
  GridDensity f, g, h;
};

// Equality fixture: Phi on a convex set, homotheties c0, x0.
DubucTriple dubuc_construct(const GridDensity& Phi, double s, const Exponent& p, double c0,
                            const std::vector<double>& x0);
DubucTriple dubuc_construct(const GridPtr& grid, const std::function<double(const Point&)>& Phi, double s,
                            const Exponent& p, double c0, const std::vector<double>& x0);
// multiplicative constant of h in the normal form
double dubuc_h_factor(double s, const Exponent& p, int n, double c0);

struct DubucFit {
  double c0 = 1;
  std::vector<double> x0;
  double t = 0;
  double convexity = 0;       // convexity residual of supp f
  double support_g = 0;       // supp g vs c0 supp f + x0
  double support_h = 0;       // supp h vs (1-s+s c0) supp f + s x0
  double function_g = 0;      // relative mismatch of g against the normal form
  double function_h = 0;      // relative mismatch of h against the normal form
  double concavity = 0;       // worst (t,p)-concavity violation of f, relative to max f
  bool ok = false;
};

DubucFit dubuc_fit(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s, const Exponent& p,
                   unsigned seed = 1, int samples = 20000);

struct QuantitativeBM {
  double deficit = 0;
  double bound = 0;
  std::optional<double> closed_form_bound;  // printed p = 0 form
  double discretization_error = 0;
  bool holds = false;
  double measure_a = 0, measure_b = 0, measure_z = 0;
};

QuantitativeBM quantitative_bm(const DiscreteSet& A, const DiscreteSet& B, double s, const Exponent& p);
// exact path from known measures (boxes, polygons)
QuantitativeBM quantitative_bm_exact(double mA, double mB, double mZ, int n, double s, const Exponent& p);
QuantitativeBM quantitative_bm_boxes(const std::vector<double>& a_lo, const std::vector<double>& a_hi,
                                     const std::vector<double>& b_lo, const std::vector<double>& b_hi, double s,
                                     const Exponent& p);

struct DistortedBM {
  double lhs = 0;
  double rhs = 0;
  double deficit = 0;
  double theta = 0;
  double tol = 0;
  bool void_inequality = false;  // a distortion coefficient is infinite
  bool holds = false;
};

DistortedBM distorted_bm(const DiscreteSet& A, const DiscreteSet& B, double s);

DubucTriple distorted_bm_densities(const DiscreteSet& A, const DiscreteSet& B, double s);

// worst violation of the curvature-weighted admissibility condition over sampled pairs
double curvature_condition_violation(const GridDensity& f, const GridDensity& g, const GridDensity& h, double s,
                                     const Exponent& p, unsigned seed = 1, int samples = 10000);

struct CurvatureResiduals {
  double ratio_f = 0;  // h-ratio vs weighted f-ratio
  double ratio_g = 0;  // h-ratio vs weighted g-ratio
  double mass_balance = 0;
  double max_residual() const;
};

CurvatureResiduals curvature_equality_residuals(const GridDensity& f, const GridDensity& g, const GridDensity& h,
                                                double s, const Exponent& p, const TransportPlan& plan);

struct HolderIntegral {
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  double quadrature_error = 0;
  double fitted_c = 0;
  bool pass = false;
  bool equality = false;
};

HolderIntegral holder_integral_check(const GridDensity& f1, const GridDensity& f2, double s, int n);

}  // namespace bbl
