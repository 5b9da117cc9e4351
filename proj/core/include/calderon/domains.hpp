#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "calderon/beltrami.hpp"
#include "calderon/boundary.hpp"
#include "calderon/conductivity.hpp"
#include "calderon/dtn.hpp"
#include "calderon/field_algebra.hpp"

namespace calderon::domains {

// Closed-form conformal charts onto the unit disc.
class ConformalChart {
 public:
  enum class Kind { Identity, HalfplaneToDisc, ExteriorToDisc };

  explicit ConformalChart(Kind kind = Kind::Identity) : kind_(kind) {}
  static ConformalChart identity() { return ConformalChart(Kind::Identity); }
  // (z + i) / (z - i): lower half plane onto the disc, -i -> 0, infinity -> 1.
  static ConformalChart halfplane() { return ConformalChart(Kind::HalfplaneToDisc); }
  // 1 / z: exterior of the disc onto the punctured disc.
  static ConformalChart exterior() { return ConformalChart(Kind::ExteriorToDisc); }

  Kind kind() const noexcept { return kind_; }
  std::string name() const;
  Complex map(Complex z) const;
  Complex inverse(Complex w) const;
  Complex derivative(Complex z) const;
  // Largest |inverse(map(z)) - z| / max(1, |z|) over the samples.
  double round_trip_error(const std::vector<Complex>& samples) const;

 private:
  Kind kind_;
};

// ---------------------------------------------------------------- half plane

// FEM on the lower half plane. The mesh is the Moebius preimage of the disc
// mesh with the star of the vertex at infinity removed; the ring around that
// star carries the value at infinity.
class HalfplaneDtn {
 public:
  // sigma must equal the identity on the truncation ring.
  HalfplaneDtn(const TensorFunction& sigma, double h, std::string sigma_spec = {});

  const dtn::FemOperator& fem() const noexcept { return *op_; }
  // Real-line nodes in boundary order.
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t far_count() const noexcept { return far_count_; }
  const std::string& sigma_spec() const noexcept { return spec_; }
  double h() const noexcept { return h_; }
  // Energy of the discrete sigma-harmonic extension of phi, which tends to
  // phi_inf at infinity.
  double energy(const std::function<double(double)>& phi, double phi_inf) const;

 private:
  std::shared_ptr<const dtn::TriangularMesh> mesh_;
  std::unique_ptr<dtn::FemOperator> op_;
  std::vector<double> nodes_;
  std::size_t far_count_ = 0;
  std::string spec_;
  double h_ = 0.0;
};

// Quadratic form of the identity conductivity on the half plane,
// (1 / 2 pi) double integral (phi(x) - phi(y))^2 / (x - y)^2, for phi
// supported in [a, b].
double douglas_energy(const std::function<double(double)>& phi, double a, double b, int nodes = 400);

// Disc DtN of the Moebius image: boundary data exp(i n theta) pulled back to
// the real line, constants completed by Lambda 1 = 0.
dtn::DtnMatrix halfplane_to_disc_dtn(const HalfplaneDtn& lambda, int cutoff);

// ---------------------------------------------------------------- exterior

struct ExteriorSolution {
  dtn::FemSolution disc;  // on the unit disc in the chart w = 1/z
  std::shared_ptr<dtn::PointLocator> locator;

  // u(z) for |z| >= 1.
  double evaluate(Complex z) const;
};

// sigma on |z| > 1, identity for |z| > support_radius.
ConductivityModel exterior_to_disc_conductivity(const ConductivityModel& sigma);
ExteriorSolution exterior_to_disc_solve(const ConductivityModel& sigma, const BoundaryTrace& phi, double h);
// Exterior DtN in the angle of the original circle (outward normal of S,
// i.e. -d/dr).
dtn::DtnMatrix exterior_dtn(const ConductivityModel& sigma, double h, int cutoff);

// ---------------------------------------------------------------- reflection

// eta(x1, x2) = (x1, -x2).
inline Complex eta(Complex z) noexcept { return std::conj(z); }

struct ReflectedConductivity {
  TensorFunction half;  // sigma on the upper half disc
  // sigma on the upper half, eta_* sigma (off-diagonal negated) on the lower.
  SymTensor operator()(Complex z) const;
  TensorFunction tensor() const;
};

ReflectedConductivity reflect_conductivity(const TensorFunction& sigma_upper);

// ---------------------------------------------------------------- partial data

// Partial boundary maps on the half disc D+ with Gamma its arc.
struct PartialData {
  int cutoff = 0;
  // Column n-1: sine coefficients b_1..b_N of the flux for Dirichlet data
  // sin(n theta) on Gamma and 0 on the flat side.
  Eigen::MatrixXd lambda_gamma;
  // Column n-1: cosine coefficients a_0..a_N of the trace for Neumann data
  // cos(n theta) on Gamma and 0 on the flat side.
  Eigen::MatrixXd sigma_gamma;
  double h = 0.0;
};

PartialData partial_data(const TensorFunction& sigma_upper, double h, int cutoff);
// Odd pairs from Lambda_Gamma, even pairs from Sigma_Gamma, and (1, 0).
dtn::CauchyDataSet cauchy_data_from_partial(const PartialData& data);
// max over pairs (D, N) of |N - Lambda D| / max(|N|, |Lambda D|) on modes
// |n| <= modes, for pairs whose data lives on those modes.
double cauchy_set_distance(const dtn::CauchyDataSet& set, const dtn::DtnMatrix& lambda, int modes);

// ---------------------------------------------------------------- extension

// Beurling-Ahlfors extension of a circle homeomorphism, conjugated from the
// upper half plane by the Cayley transform after normalizing g(0) = 0 with a
// rotation.
class BeurlingAhlfors {
 public:
  explicit BeurlingAhlfors(CircleHomeomorphism g, int quadrature = 32);

  const CircleHomeomorphism& boundary_map() const noexcept { return g_; }
  double quasisymmetry_modulus() const { return g_.quasisymmetry_modulus(); }
  // |w| <= 1.
  Complex evaluate(Complex w) const;
  // dF/dz, dF/dzbar by central differences.
  std::pair<Complex, Complex> derivatives(Complex w) const;
  // Sampled on a grid, extended outside the disc by the reflection
  // 1 / conj(F(1 / conj w)). Throws if J <= 0 at a cell.
  DiffeoMap sample(GridSpec grid) const;
  // Largest |F(e^{it}) - e^{i g(t)}| over the sample angles of g.
  double boundary_error() const;

 private:
  double h_real(double x) const;  // boundary map on the real line
  Complex halfplane(Complex z) const;

  CircleHomeomorphism g_;
  double alpha_ = 0.0;
  std::vector<double> gl_x_, gl_w_;
};

struct ExtensionReport {
  double min_jacobian = 0.0;
  double max_distortion = 0.0;
  double boundary_error = 0.0;
  double quasisymmetry = 0.0;
  bool warned = false;
  std::string warning;
};

ExtensionReport extension_report(const BeurlingAhlfors& f, GridSpec grid, double qs_threshold = 50.0);

// (F(w) + conj(F_eta(conj w))) / 2 with F_eta the extension of eta g eta.
// Accepted only if J > 0 on the grid cells inside the disc.
std::function<Complex(Complex)> symmetric_extension(const CircleHomeomorphism& g, GridSpec check_grid);

// ---------------------------------------------------------------- representative

// H_* sigma~ on the disc with H the inverse of Phi = R~^-1 o AB(g), where
// g is the angle map t -> arg F^(e^{it}) and R~ the radial chart of the star
// domain bounded by F^(circle).
struct Representative {
  TensorFunction tensor;
  std::shared_ptr<const BeurlingAhlfors> extension;
  std::function<double(double)> rho;  // radial chart of the image domain
  std::function<Complex(Complex)> phi;  // D -> image domain
};

Representative build_representative(const std::function<double(Complex)>& sigma_tilde,
                                    const std::vector<Complex>& boundary_samples);

}  // namespace calderon::domains
