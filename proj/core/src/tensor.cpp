#include "calderon/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace calderon {

std::pair<double, double> SymTensor::eigenvalues() const noexcept {
  const double m = 0.5 * trace();
  const double r = std::hypot(0.5 * (s11 - s22), s12);
  return {m - r, m + r};
}

double SymTensor::anisotropy() const noexcept {
  auto [lo, hi] = eigenvalues();
  return hi / lo;
}

namespace pointwise {

Complex mu1(const SymTensor& s) {
  const double sd = std::sqrt(s.det());
  return Complex(-s.s11 + s.s22, -2.0 * s.s12) / (s.trace() + 2.0 * sd);
}

double mu2(const SymTensor& s) {
  const double sd = std::sqrt(s.det());
  return (1.0 - sd) / (1.0 + sd);
}

NuPair sigma_to_nu(const SymTensor& s) {
  const double d = s.det();
  const double denom = 1.0 + s.trace() + d;
  return {Complex(s.s22 - s.s11, -2.0 * s.s12) / denom, (1.0 - d) / denom};
}

NuPair nu_from_mu(Complex mu1, double mu2) {
  const double a2 = std::norm(mu1), m2 = mu2 * mu2;
  const double den = 1.0 - a2 * m2;
  return {mu1 * (1.0 - m2) / den, mu2 * (1.0 - a2) / den};
}

MuPair mu_from_nu(Complex nu1, double nu2) {
  const double A = std::abs(nu1), B = nu2;
  if (A + std::abs(B) >= 1.0) throw InvalidInput("mu_from_nu: |nu1| + |nu2| must be < 1");
  // Unknowns a = |mu1| >= 0, m = mu2.
  auto residual = [&](double a, double m, double& f1, double& f2) {
    const double den = 1.0 - a * a * m * m;
    f1 = a * (1.0 - m * m) / den - A;
    f2 = m * (1.0 - a * a) / den - B;
  };
  double a = A, m = B, f1, f2;
  residual(a, m, f1, f2);
  for (int it = 0; it < 100 && std::hypot(f1, f2) > 1e-16; ++it) {
    const double a2 = a * a, m2 = m * m, den = 1.0 - a2 * m2, den2 = den * den;
    // d/da, d/dm of both components
    const double j11 = (1.0 - m2) * (1.0 + a2 * m2) / den2;
    const double j12 = a * (-2.0 * m * den + 2.0 * a2 * m * (1.0 - m2)) / den2;
    const double j21 = m * (-2.0 * a * den + 2.0 * a * m2 * (1.0 - a2)) / den2;
    const double j22 = (1.0 - a2) * (1.0 + a2 * m2) / den2;
    const double det = j11 * j22 - j12 * j21;
    const double da = -(j22 * f1 - j12 * f2) / det;
    const double dm = -(-j21 * f1 + j11 * f2) / det;
    const double r0 = std::hypot(f1, f2);
    double step = 1.0;
    for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
      const double an = a + step * da, mn = m + step * dm;
      if (an < 0.0 || an >= 1.0 || std::abs(mn) >= 1.0) continue;
      double g1, g2;
      residual(an, mn, g1, g2);
      if (std::hypot(g1, g2) < r0 || step < 1e-6) {
        a = an;
        m = mn;
        f1 = g1;
        f2 = g2;
        break;
      }
    }
    if (step < 1e-9) break;
  }
  if (std::hypot(f1, f2) > 1e-12) throw NumericalFailure("mu_from_nu: Newton did not converge");
  const Complex phase = A > 0.0 ? nu1 / A : Complex(1.0, 0.0);
  return {a * phase, m};
}

SymTensor mu_to_sigma(Complex mu1, double mu2) {
  const double sd = (1.0 - mu2) / (1.0 + mu2);
  const double a2 = std::norm(mu1);
  const double tr = 2.0 * sd * (1.0 + a2) / (1.0 - a2);
  // mu1 * (tr + 2 sd) = (s22 - s11) - 2 i s12
  const Complex w = mu1 * (tr + 2.0 * sd);
  const double diff = w.real();
  return {0.5 * (tr - diff), -0.5 * w.imag(), 0.5 * (tr + diff)};
}

SymTensor nu_to_sigma(Complex nu1, double nu2) {
  const MuPair m = mu_from_nu(nu1, nu2);
  return mu_to_sigma(m.mu1, m.mu2);
}

SymTensor hat(const SymTensor& s) {
  const double d = s.det();
  return {s.s11 / d, s.s12 / d, s.s22 / d};
}

SymTensor pushforward(const SymTensor& s, Complex dz, Complex dzbar) {
  const Eigen::Matrix2d D = real_jacobian(dz, dzbar);
  const double J = D.determinant();
  if (!(J > 0.0)) throw InvalidInput("pushforward: map is not orientation preserving");
  return SymTensor::from_matrix(D * s.matrix() * D.transpose() / J);
}

}  // namespace pointwise
}  // namespace calderon
