#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calderon/beltrami.hpp"
#include "calderon/boundary.hpp"
#include "calderon/dtn.hpp"
#include "calderon/spectral.hpp"

namespace calderon::cgo {

struct CgoOptions {
  double tol = 1e-10;
  int max_iterations = 400;  // fixed point sweeps before switching to GMRES
  int gmres_restart = 80;
  int gmres_max_iterations = 3000;
  int multipole_order = 8;
};

// Whole-plane solution W = exp(ikz) M of dW/dzbar = mu2 conj(dW/dz).
struct CgoSolution {
  Complex k;
  ComplexField m;     // normalized part W exp(-ikz)
  ComplexField q;     // dM/dzbar
  std::vector<Complex> moments;  // integral of q w^p dA, p = 0 .. multipole_order
  double residual = 0.0;              // relative, on supp mu2
  double normalization_defect = 0.0;  // sup |M - 1| on the outer grid ring
  double multipole_tail = 0.0;        // same after removing the far-field expansion of C q
  int iterations = 0;
  std::string method;  // "exact", "fixed-point" or "gmres"

  // M from the grid inside the box, from the multipole expansion outside.
  Complex normalized(Complex z) const;
  Complex w(Complex z) const;
  std::string report() const;
};

CgoSolution solve_cgo(const SpectralTransform& transform, const RealField& mu2, Complex k,
                      const CgoOptions& opts = {});
CgoSolution solve_cgo(const RealField& mu2, Complex k, const CgoOptions& opts = {});

// mu2 = (1 - s) / (1 + s) for an isotropic conductivity s.
RealField mu2_from_isotropic(const RealField& sigma_tilde);

// G(z) = exp(ikz) (1 + sum_{j=1..J} a_j z^-j) on |z| >= 1.
struct ExteriorCgo {
  Complex k;
  Eigen::VectorXcd laurent;  // a_1 .. a_J
  double boundary_defect = 0.0;  // relative size of Im G - H Re G on modes 0 < |n| <= N
  double spectral_tail = 0.0;    // relative size of the modes of Re G beyond N
  double condition = 0.0;

  Complex normalized(Complex z) const;
  Complex evaluate(Complex z) const;
  // log of the normalized part continued radially from infinity.
  Complex log_normalized(Complex z) const;
  BoundaryTrace trace(int cutoff) const;
};

// H: the Hilbert matrix of the unit disc on modes |n| <= N (dtn::hilbert_matrix).
ExteriorCgo solve_G_from_boundary_data(const Eigen::MatrixXcd& hilbert, Complex k, int laurent_terms = 0,
                                       double tol = 1e-8);

struct GluedExtension {
  ComplexField values;  // G outside the unit disc, the interior extension inside
  double trace_mismatch = 0.0;
  double residual = 0.0;
};

GluedExtension glue_interior_extension(const SpectralTransform& transform, const ExteriorCgo& g,
                                       const ComplexField& nu1, const RealField& nu2, int cutoff = 48,
                                       const beltrami::SolverOptions& opts = {});

// W = exp(ik phi) with phi continuous on the grid and phi ~ z at the edge.
struct PhaseFunction {
  Complex k;
  ComplexField phi;
  double reconstruction_error = 0.0;  // sup |exp(ik phi) - W| / |W|
  double deviation = 0.0;             // sup |phi - z|
};

PhaseFunction extract_phase(const CgoSolution& w);

struct RecoverySample {
  Complex z;
  double k = 0.0;
  Complex estimate;
  double error = -1.0;  // |estimate - truth| when a truth is supplied
};

struct ExteriorRecovery {
  std::vector<RecoverySample> samples;    // grouped by k in schedule order
  std::vector<double> max_error_by_k;     // empty without truth
  std::vector<double> boundary_defect_by_k;
  bool error_monotone = true;
  std::string report() const;
};

std::vector<double> default_k_schedule();

// F^(z) = z + log(normalized G)/(ik) along k = |k| exp(i ray_angle).
ExteriorRecovery recover_F_exterior(const dtn::DtnMatrix& lambda, std::span<const Complex> points,
                                    std::span<const double> k_schedule, double ray_angle = 0.0,
                                    const std::function<Complex(Complex)>& truth = {}, int laurent_terms = 0);

struct DirectionalOptions {
  int rays = 16;
  double weight_power = 2.0;
  int laurent_terms = 0;
};

// Blend of the single-ray estimates z + log(normalized G)/(ik) over
// k = |k| exp(2 pi i r / rays). Each ray is weighted at z = |z| exp(i theta)
// by cos^p(theta - theta_r), theta_r = -pi/2 - arg k the direction where
// |exp(ikz)| peaks, and ignored on the opposite half circle.
std::vector<Complex> recover_F_directional(const dtn::DtnMatrix& lambda, std::span<const Complex> points, double k,
                                           const DirectionalOptions& opts = {});

struct BoundaryRecoveryOptions {
  DirectionalOptions directional;
  double ring_radius = 1.25;
  int laurent_order = 4;
  int ring_samples = 256;
};

// F^ on the unit circle at e^{2 pi i j / samples}. F^ is recovered on the
// ring |z| = ring_radius, where the estimate converges like 1/k, and continued
// to the circle through its Laurent expansion z + sum c_p z^-p (F^ is
// conformal outside the disc).
std::vector<Complex> recover_boundary_map(const dtn::DtnMatrix& lambda, double k, int samples = 512,
                                          const BoundaryRecoveryOptions& opts = {});

// Image of the unit circle under a boundary map given by samples F(e^{it_j}).
struct ImageBoundary {
  CircleHomeomorphism to_source;  // angle on the image curve -> t
  BoundaryTrace radius;           // |F(e^{it})| as a function of t
  double rho(double image_angle) const;
};

ImageBoundary image_boundary(std::span<const Complex> samples, int radius_cutoff = 64);

// Lambda~ = transform_dtn(Lambda, F^-1) with F given on the unit circle.
dtn::DtnMatrix recover_dtn_isotropic(const dtn::DtnMatrix& lambda, std::span<const Complex> boundary_samples,
                                     int cutoff);

// Forward DtN of the isotropic conductivity sqrt(det sigma) o F^-1 on F(D),
// meshed as a star domain and parametrized by the angle on the image curve.
dtn::DtnMatrix image_dtn(const beltrami::Isotropization& iso, const TensorFunction& sigma, double h, int cutoff,
                         int boundary_samples = 512);

}  // namespace calderon::cgo
