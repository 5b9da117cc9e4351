#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "calderon/grid.hpp"

namespace calderon {

// Trace on the unit circle as Fourier coefficients c_n, |n| <= N, in the
// basis e_n = exp(i n theta).
class BoundaryTrace {
 public:
  explicit BoundaryTrace(int cutoff = 0);
  explicit BoundaryTrace(Eigen::VectorXcd coeffs);  // length 2N+1, entry n+N

  static BoundaryTrace mode(int n, int cutoff);
  // Samples at theta_j = 2 pi j / M, M > 2N.
  static BoundaryTrace from_samples(std::span<const Complex> samples, int cutoff);
  static BoundaryTrace from_function(const std::function<Complex(double)>& f, int cutoff, int samples = 0);

  int cutoff() const noexcept { return cutoff_; }
  Complex& operator[](int n) { return c_(n + cutoff_); }
  Complex operator[](int n) const { return c_(n + cutoff_); }
  const Eigen::VectorXcd& coefficients() const noexcept { return c_; }

  Complex evaluate(double theta) const;
  std::vector<Complex> samples(int count) const;
  // d/dtheta
  BoundaryTrace derivative() const;
  // Coefficient-wise truncation or zero extension to a new cutoff.
  BoundaryTrace resized(int cutoff) const;
  bool is_real(double tol = 1e-12) const;
  double h_half_norm_squared() const;  // sum (1 + |n|) |c_n|^2

 private:
  int cutoff_;
  Eigen::VectorXcd c_;
};

// Orientation preserving circle homeomorphism stored as samples of its lift
// g(theta_j), theta_j = 2 pi j / M, with g(theta + 2 pi) = g(theta) + 2 pi.
class CircleHomeomorphism {
 public:
  explicit CircleHomeomorphism(std::vector<double> lift);

  static CircleHomeomorphism from_function(const std::function<double(double)>& lift, int samples);
  static CircleHomeomorphism identity(int samples);
  static CircleHomeomorphism rotation(double alpha, int samples);

  int size() const noexcept { return int(lift_.size()); }
  double theta(int j) const noexcept { return 2.0 * kPi * j / size(); }
  double lift(int j) const;  // any integer j, periodic extension
  const std::vector<double>& lift_samples() const noexcept { return lift_; }

  // Periodic cubic interpolation of the lift.
  double evaluate(double theta) const;
  double derivative(double theta) const;
  double derivative_at(int j) const;  // fourth order differences
  CircleHomeomorphism inverse(int samples = 0) const;
  // this o inner
  CircleHomeomorphism compose(const CircleHomeomorphism& inner, int samples = 0) const;
  // max over dyadic triples (t - d, t, t + d) of the ratio of image arcs.
  double quasisymmetry_modulus() const;

 private:
  std::vector<double> lift_;
};

}  // namespace calderon
