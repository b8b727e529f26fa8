#pragma once

#include <array>
#include <string>

namespace bbl {

enum class SpaceKind { euclidean, sphere, hyperbolic };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

// Coordinates in the embedding: R^n, or R^{n+1} for the curved models.
// Hyperbolic points use the hyperboloid -x0^2 + x1^2 + ... = 1/k, x0 > 0.
struct Point {
  std::array<double, 4> c{};
  int dim = 0;

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }
};

class ModelSpace {
 public:
  static ModelSpace euclidean(int n);
  static ModelSpace sphere(int n, double k = 1.0);
  static ModelSpace hyperbolic(int n, double k = -1.0);
  static ModelSpace make(SpaceKind kind, int n, double k);

  SpaceKind kind() const { return kind_; }
  int n() const { return n_; }
  double k() const { return k_; }
  int ambient_dim() const { return kind_ == SpaceKind::euclidean ? n_ : n_ + 1; }
  // 1/sqrt|k| for curved spaces, 0 otherwise
  double radius() const { return radius_; }
  // pi/sqrt(k) on the sphere, +inf otherwise
  double diameter() const;

  bool contains(const Point& x, double tol = 1e-12) const;
  // Pulls a slightly perturbed embedding vector back onto the model.
  Point normalize(Point x) const;

  Point origin() const;
  Point euclidean_point(std::initializer_list<double> xs) const;
  // Sphere n=2: colatitude/longitude. Hyperbolic n=2: geodesic polar coordinates about origin().
  Point from_polar(double rho_or_theta, double phi) const;

  friend bool operator==(const ModelSpace& a, const ModelSpace& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.k_ == b.k_;
  }

 private:
  SpaceKind kind_ = SpaceKind::euclidean;
  int n_ = 2;
  double k_ = 0.0;
  double radius_ = 0.0;
};

// sinh(sqrt(-k) r)/(sqrt(-k) r), 1, or sin(sqrt(k) r)/(sqrt(k) r).
double sk(double k, double r);

// Distortion coefficient tau_s^{k,n}(theta); +inf when k theta^2 >= pi^2.
double tau(double s, double k, int n, double theta);

double distance(const ModelSpace& M, const Point& x, const Point& y);

// Whether (x,y) is flagged as a cut-locus pair (antipodal on the sphere).
bool is_cut_locus_pair(const ModelSpace& M, const Point& x, const Point& y);

Point geodesic_point(const ModelSpace& M, const Point& x, const Point& y, double s);

// v_s(x,y) = (s_k(s d)/s_k(d))^{n-1}, exact in constant curvature.
double vol_distortion(const ModelSpace& M, double s, const Point& x, const Point& y);
double vol_distortion_at(const ModelSpace& M, double s, double d);

double ball_volume(const ModelSpace& M, double r);

}  // namespace bbl
