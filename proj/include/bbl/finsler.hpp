#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "bbl/polygon.hpp"

namespace bbl {

// Minkowski norm on R^2.
//   randers:   F(y) = sqrt(<Qy,y>) + <b,y>,  <Q^{-1}b,b> < 1
//   matsumoto: F(y) = |y|^2 / (v|y| + (g/2) y2 sin(alpha)),  g sin(alpha) < v
//   scaled:    F(y) = |y| / v
class MinkowskiNorm {
 public:
  enum class Kind { randers, matsumoto, scaled_euclidean };

  static MinkowskiNorm randers(const std::array<double, 4>& Q, const Vec2& b);
  static MinkowskiNorm matsumoto(double alpha, double v, double g = kGravity);
  static MinkowskiNorm scaled_euclidean(double v);

  Kind kind() const { return kind_; }
  double operator()(const Vec2& y) const;
  bool reversible() const;
  std::string describe() const;

  static constexpr double kGravity = 9.81;

 private:
  Kind kind_ = Kind::scaled_euclidean;
  std::array<double, 4> Q_{1, 0, 0, 1};  // row-major
  Vec2 b_{0, 0};
  double alpha_ = 0, v_ = 1, g_ = kGravity;
};

inline double norm_eval(const MinkowskiNorm& F, const Vec2& y) { return F(y); }

inline constexpr int kDefaultBallSamples = 1024;

// vertices x + r u/F(u) for m directions uniform in angle
Polygon forward_ball(const MinkowskiNorm& F, const Vec2& x, double r, int m = kDefaultBallSamples);
// vertices y - R u/F(u)
Polygon backward_ball(const MinkowskiNorm& F, const Vec2& y, double R, int m = kDefaultBallSamples);

inline Polygon polygon_minkowski_interpolation(const Polygon& A, const Polygon& B, double s) {
  return minkowski_combination(A, B, s);
}

struct MinkowskiBM {
  double lhs = 0;
  double rhs = 0;
  double deficit = 0;
  double tol = 0;  // 10 * change of lhs and rhs when m doubles
  double area_a = 0, area_b = 0, area_z = 0;
};

MinkowskiBM minkowski_bm_deficit(const MinkowskiNorm& F, const Vec2& x, double r, const Vec2& y, double R, double s,
                                 int m = kDefaultBallSamples);

struct HomothetyTest {
  bool translate = false;
  double residual = 0;  // max radial vertex distance, relative to R
  Vec2 shift{0, 0};     // fitted translation: B = (R/r) * forward_ball(x, r) + shift
};

inline constexpr double kHomothetyTol = 1e-6;

HomothetyTest homothety_test(const MinkowskiNorm& F, const Vec2& x, double r, const Vec2& y, double R,
                             int m = kDefaultBallSamples);

struct BallPanel {
  std::string title;
  Polygon forward, backward;
};

void write_svg(std::ostream& os, const std::vector<BallPanel>& panels);

}  // namespace bbl
