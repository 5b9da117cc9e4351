#include "calderon/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace calderon::beltrami {

namespace {

// Geometric decay rate of the tail of an increment history.
double fit_rate(const std::vector<double>& inc) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < inc.size(); ++k)
    if (inc[k] > 1e-14) {
      xs.push_back(double(k));
      ys.push_back(std::log(inc[k]));
    }
  if (xs.size() < 3) return 0.0;
  const std::size_t start = xs.size() / 3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = double(xs.size() - start);
  for (std::size_t k = start; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return std::exp(slope);
}

}  // namespace

std::string PrincipalSolution::report() const {
  std::ostringstream os;
  os << "iterations=" << iterations << "\nresidual=" << residual << "\nkappa=" << kappa
     << "\ncontraction_estimate=" << contraction_estimate << "\n";
  return os.str();
}

ComplexField beurling_apply(const ComplexField& h, TorusMode mode) {
  SpectralTransform t(h.grid(), mode);
  return t.beurling(h);
}

ComplexField cauchy_apply(const ComplexField& h, TorusMode mode) {
  SpectralTransform t(h.grid(), mode);
  const GridSpec& g = h.grid();
  // support touching the box edge makes the periodized result unreliable
  const double margin = 0.25 * g.half_width;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Complex z = g.point(k);
    if (h[k] != 0.0 && (std::abs(z.real()) > g.half_width - margin || std::abs(z.imag()) > g.half_width - margin))
      throw InvalidInput("cauchy_apply: density support reaches the grid margin");
  }
  return t.cauchy(h);
}

PrincipalSolution solve_principal(const ComplexField& mu, const SolverOptions& opts) {
  SpectralTransform t(mu.grid(), opts.mode);
  return solve_principal(t, mu, opts);
}

PrincipalSolution solve_principal(const SpectralTransform& transform, const ComplexField& mu,
                                  const SolverOptions& opts) {
  const GridSpec& grid = mu.grid();
  if (!(grid == transform.grid())) throw InvalidInput("solve_principal: grid mismatch");
  PrincipalSolution sol;
  sol.kappa = sup_norm(mu);
  if (!(sol.kappa < 1.0)) {
    std::ostringstream os;
    os << "solve_principal: sup|mu| = " << sol.kappa << " is not below 1";
    throw InvalidInput(os.str());
  }
  const std::size_t n = grid.size();
  double mu_norm = 0.0;
  for (const auto& v : mu.values()) mu_norm += std::norm(v);
  mu_norm = std::sqrt(mu_norm);

  ComplexField h(grid), sh(grid), ch(grid);
  if (mu_norm > 0.0) {
    for (std::size_t k = 0; k < n; ++k) h[k] = mu[k];
    std::vector<Complex> next(n);
    bool converged = false;
    for (int it = 1; it <= opts.max_iterations; ++it) {
      transform.cauchy_beurling(h, nullptr, &sh);
      double diff = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        next[k] = mu[k] * (1.0 + sh[k]);
        diff += std::norm(next[k] - h[k]);
        norm += std::norm(next[k]);
        h[k] = next[k];
      }
      const double inc = std::sqrt(diff / std::max(norm, 1e-300));
      sol.increments.push_back(inc);
      sol.iterations = it;
      if (inc <= opts.tol) {
        converged = true;
        break;
      }
    }
    sol.contraction_estimate = fit_rate(sol.increments);
    transform.cauchy_beurling(h, &ch, &sh);
    double r = 0.0;
    for (std::size_t k = 0; k < n; ++k) r += std::norm(h[k] - mu[k] * (1.0 + sh[k]));
    sol.residual = std::sqrt(r) / mu_norm;
    if (!converged && sol.residual > opts.tol) {
      std::ostringstream os;
      os << "solve_principal: no convergence after " << sol.iterations << " iterations, residual " << sol.residual
         << ", contraction estimate " << sol.contraction_estimate;
      throw NumericalFailure(os.str());
    }
  }
  ComplexField values(grid), dz(grid);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = grid.point(k) + ch[k];
    dz[k] = 1.0 + sh[k];
  }
  sol.density = h;
  sol.map = DiffeoMap(std::move(values), std::move(dz), std::move(h));
  return sol;
}

LinearBeltramiSolution solve_linear_beltrami(const SpectralTransform& transform, const ComplexField& nu1,
                                             const RealField& nu2, const BoundaryTrace& boundary, double radius,
                                             const SolverOptions& opts) {
  const GridSpec& grid = transform.grid();
  if (!(nu1.grid() == grid && nu2.grid() == grid)) throw InvalidInput("solve_linear_beltrami: grid mismatch");
  const std::size_t n = grid.size();
  double bound = 0.0;
  for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(nu1[k]) + std::abs(nu2[k]));
  if (!(bound < 1.0)) throw InvalidInput("solve_linear_beltrami: sup(|nu1| + |nu2|) must be below 1");

  const int N = boundary.cutoff();
  // analytic part A(z) = sum_{n>=0} c_n (z / radius)^n and its derivative
  auto analytic = [&](Complex z, Complex& a, Complex& da) {
    const Complex w = z / radius;
    a = 0.0;
    da = 0.0;
    for (int m = N; m >= 0; --m) {
      da = da * w + a;
      a = a * w + boundary[m];
    }
    da /= radius;
  };
  ComplexField A(grid), dA(grid);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex z = grid.point(k);
    if (std::abs(z) <= radius * 1.2 || nu1[k] != 0.0 || nu2[k] != 0.0) analytic(z, A[k], dA[k]);
  }

  LinearBeltramiSolution sol;
  ComplexField q(grid), sq(grid), cq(grid);
  auto rhs = [&](std::size_t k, Complex d) { return nu1[k] * d + nu2[k] * std::conj(d); };
  double qn = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    q[k] = rhs(k, dA[k]);
    qn += std::norm(q[k]);
  }
  if (qn > 0.0) {
    bool converged = false;
    for (int it = 1; it <= opts.max_iterations; ++it) {
      transform.cauchy_beurling(q, nullptr, &sq);
      double diff = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const Complex nq = rhs(k, dA[k] + sq[k]);
        diff += std::norm(nq - q[k]);
        norm += std::norm(nq);
        q[k] = nq;
      }
      sol.iterations = it;
      if (std::sqrt(diff / std::max(norm, 1e-300)) <= opts.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalFailure("solve_linear_beltrami: fixed point did not converge");
  }
  transform.cauchy_beurling(q, &cq, &sq);
  sol.g = ComplexField(grid);
  sol.dg = ComplexField(grid);
  double r = 0.0, rn = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sol.g[k] = A[k] + cq[k];
    sol.dg[k] = dA[k] + sq[k];
    r += std::norm(q[k] - rhs(k, sol.dg[k]));
    rn += std::norm(q[k]);
  }
  sol.residual = rn > 0.0 ? std::sqrt(r / rn) : 0.0;

  // trace on the circle: A from the nonnegative modes, C q interpolated
  const int M = std::max(256, 8 * N);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    const Complex z = std::polar(radius, th);
    Complex a, da;
    analytic(z, a, da);
    const Complex g = a + cq.interpolate(z);
    const Complex phi = boundary.evaluate(th);
    num += std::norm(g - phi);
    den += std::norm(phi);
  }
  sol.trace_mismatch = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num / M);
  return sol;
}

std::string Isotropization::report() const {
  std::ostringstream os;
  os << principal.report() << "anisotropy_defect=" << anisotropy_defect << "\ndet_defect=" << det_defect << "\n";
  return os.str();
}

Isotropization isotropize(const ConductivityTensor& sigma, const SolverOptions& opts, int subsamples) {
  SpectralTransform t(sigma.grid(), opts.mode);
  return isotropize(t, sigma, opts, subsamples);
}

Isotropization isotropize(const SpectralTransform& transform, const ConductivityTensor& sigma,
                          const SolverOptions& opts, int subsamples) {
  const GridSpec& grid = sigma.grid();
  Isotropization out;
  out.principal = solve_principal(transform, mu1_from_sigma(sigma), opts);
  const DiffeoMap& F = out.principal.map;
  out.pushed = pushforward_pointwise(sigma, F);
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const SymTensor p = out.pushed.at(k);
    out.anisotropy_defect = std::max(out.anisotropy_defect, p.anisotropy() - 1.0);
    const double d0 = sigma.at(k).det();
    out.det_defect = std::max(out.det_defect, std::abs(p.det() - d0) / d0);
  }
  // sqrt det sigma at F^{-1}(y), averaged over subsamples of each cell
  RealField sqrt_det(grid);
  for (std::size_t k = 0; k < sigma.size(); ++k) sqrt_det[k] = std::sqrt(sigma.at(k).det());
  // cells far from the image of the support stay exactly 1
  double reach = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k)
    if (sigma.in_domain(k)) reach = std::max(reach, std::abs(F.values()[k]));
  reach += 2.0 * grid.cell();
  out.sigma_tilde = RealField(grid, 1.0);
  const double h = grid.cell();
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const Complex y0 = grid.point(k);
    if (std::abs(y0) > reach) continue;
    double acc = 0.0;
    for (int q = 0; q < subsamples; ++q)
      for (int p = 0; p < subsamples; ++p) {
        const Complex y = y0 + Complex((p + 0.5) / subsamples - 0.5, (q + 0.5) / subsamples - 0.5) * h;
        acc += sqrt_det.nearest(F.inverse(y));
      }
    out.sigma_tilde[k] = acc / (subsamples * subsamples);
  }
  return out;
}

Complex invert_map(const DiffeoMap& f, Complex y) { return f.inverse(y); }

}  // namespace calderon::beltrami
