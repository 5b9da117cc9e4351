#pragma once

#include <memory>
#include <string>
#include <vector>

#include "calderon/boundary.hpp"
#include "calderon/field_algebra.hpp"
#include "calderon/spectral.hpp"

namespace calderon::beltrami {

struct SolverOptions {
  double tol = 1e-10;      // relative residual
  int max_iterations = 200;
  TorusMode mode = TorusMode::FreeSpace;
};

struct PrincipalSolution {
  DiffeoMap map;
  ComplexField density;  // h = dF/dzbar
  double residual = 0.0;
  int iterations = 0;
  double kappa = 0.0;                 // sup |mu|
  double contraction_estimate = 0.0;  // fitted decay rate of the increments
  std::vector<double> increments;

  std::string report() const;
};

ComplexField beurling_apply(const ComplexField& h, TorusMode mode = TorusMode::FreeSpace);
ComplexField cauchy_apply(const ComplexField& h, TorusMode mode = TorusMode::FreeSpace);

// F = z + C h with h = mu (1 + S h).
PrincipalSolution solve_principal(const ComplexField& mu, const SolverOptions& opts = {});
PrincipalSolution solve_principal(const SpectralTransform& transform, const ComplexField& mu,
                                  const SolverOptions& opts = {});

struct LinearBeltramiSolution {
  ComplexField g;   // meaningful on the disc
  ComplexField dg;  // dg/dz
  double residual = 0.0;
  double trace_mismatch = 0.0;  // relative L2 distance of g on the circle to the data
  int iterations = 0;
};

// dg/dzbar = nu1 dg/dz + nu2 conj(dg/dz) on the disc |z| < radius with
// trace g = boundary. Writes g = A + C q with A the analytic extension of
// the nonnegative modes of the data; the negative modes must then be
// reproduced by C q, which holds exactly for admissible traces and is
// reported as trace_mismatch.
LinearBeltramiSolution solve_linear_beltrami(const SpectralTransform& transform, const ComplexField& nu1,
                                             const RealField& nu2, const BoundaryTrace& boundary,
                                             double radius = 1.0, const SolverOptions& opts = {});

struct Isotropization {
  PrincipalSolution principal;
  RealField sigma_tilde;          // on the same grid, 1 outside F(domain)
  ConductivityTensor pushed;      // F_* sigma evaluated at F(x), stored at x
  double anisotropy_defect = 0.0; // max (lambda_max / lambda_min) - 1
  double det_defect = 0.0;        // max relative |det F_* sigma (F(x)) - det sigma(x)|

  std::string report() const;
};

Isotropization isotropize(const ConductivityTensor& sigma, const SolverOptions& opts = {}, int subsamples = 2);
Isotropization isotropize(const SpectralTransform& transform, const ConductivityTensor& sigma,
                          const SolverOptions& opts = {}, int subsamples = 2);

Complex invert_map(const DiffeoMap& f, Complex y);

}  // namespace calderon::beltrami
