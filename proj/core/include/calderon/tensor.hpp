#pragma once

#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>

#include "calderon/grid.hpp"

namespace calderon {

// Symmetric 2x2 tensor [[s11, s12], [s12, s22]].
struct SymTensor {
  double s11 = 1.0;
  double s12 = 0.0;
  double s22 = 1.0;

  static SymTensor identity() noexcept { return {}; }
  static SymTensor isotropic(double c) noexcept { return {c, 0.0, c}; }
  double det() const noexcept { return s11 * s22 - s12 * s12; }
  double trace() const noexcept { return s11 + s22; }
  // (smallest, largest) eigenvalue.
  std::pair<double, double> eigenvalues() const noexcept;
  double anisotropy() const noexcept;  // largest / smallest eigenvalue
  Eigen::Matrix2d matrix() const noexcept {
    Eigen::Matrix2d m;
    m << s11, s12, s12, s22;
    return m;
  }
  static SymTensor from_matrix(const Eigen::Matrix2d& m) noexcept {
    return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)};
  }
  SymTensor operator+(const SymTensor& o) const noexcept { return {s11 + o.s11, s12 + o.s12, s22 + o.s22}; }
  SymTensor operator*(double a) const noexcept { return {a * s11, a * s12, a * s22}; }
  friend bool operator==(const SymTensor&, const SymTensor&) = default;
};

struct NuPair {
  Complex nu1;
  double nu2;
};

struct MuPair {
  Complex mu1;
  double mu2;
};

// Pointwise coefficient algebra. Everything here works on a single tensor.
namespace pointwise {

Complex mu1(const SymTensor& s);
double mu2(const SymTensor& s);
NuPair sigma_to_nu(const SymTensor& s);
NuPair nu_from_mu(Complex mu1, double mu2);
// Inverse of nu_from_mu by damped Newton on (|mu1|, mu2).
MuPair mu_from_nu(Complex nu1, double nu2);
SymTensor mu_to_sigma(Complex mu1, double mu2);
SymTensor nu_to_sigma(Complex nu1, double nu2);
// sigma / det(sigma)
SymTensor hat(const SymTensor& s);
// (DF sigma DF^T) / J with dz = dF/dz, dzbar = dF/dzbar.
SymTensor pushforward(const SymTensor& s, Complex dz, Complex dzbar);

}  // namespace pointwise

// Real Jacobian matrix of a map with complex derivatives dz, dzbar.
inline Eigen::Matrix2d real_jacobian(Complex dz, Complex dzbar) noexcept {
  const Complex p = dz + dzbar, m = dz - dzbar;
  Eigen::Matrix2d d;
  d << p.real(), -m.imag(), p.imag(), m.real();
  return d;
}

inline double jacobian_determinant(Complex dz, Complex dzbar) noexcept { return std::norm(dz) - std::norm(dzbar); }

}  // namespace calderon
