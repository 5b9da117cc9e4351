#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "calderon/boundary.hpp"
#include "calderon/conductivity.hpp"
#include "calderon/fem.hpp"
#include "calderon/mesh.hpp"

namespace calderon::dtn {

// Square matrix on the Fourier basis e_n, |n| <= N, entry (m, n) at
// (m + N, n + N): Lambda_mn = (1/2pi) B(e_n, conj e_m) with B the energy form.
class DtnMatrix {
 public:
  DtnMatrix() = default;
  explicit DtnMatrix(Eigen::MatrixXcd m, std::string sigma_spec = {}, double mesh_h = 0.0);

  int cutoff() const noexcept { return int(m_.rows() - 1) / 2; }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Complex operator()(int m, int n) const { return m_(m + cutoff(), n + cutoff()); }
  const std::string& sigma_spec() const noexcept { return spec_; }
  double mesh_h() const noexcept { return h_; }

  DtnMatrix truncated(int cutoff) const;
  BoundaryTrace apply(const BoundaryTrace& phi) const;
  // ||Lambda - Lambda^H|| / ||Lambda|| (Frobenius)
  double hermitian_defect() const;

 private:
  Eigen::MatrixXcd m_ = Eigen::MatrixXcd::Zero(1, 1);
  std::string spec_;
  double h_ = 0.0;
};

// diag(c |n|), the map of the constant conductivity c on the unit disc.
DtnMatrix constant_dtn(double c, int cutoff);
// Relative Frobenius distance on modes |n| <= cutoff.
double relative_defect(const DtnMatrix& a, const DtnMatrix& reference, int cutoff);

struct FemSolution {
  std::shared_ptr<const TriangularMesh> mesh;
  Eigen::VectorXd values;

  // Fourier coefficients of the nodal values on the boundary ring.
  BoundaryTrace trace(int cutoff) const;
};

struct CauchyDataSet {
  std::vector<std::pair<BoundaryTrace, BoundaryTrace>> pairs;  // (Dirichlet, Neumann)

  // max over pairs of |int psi_j Lambda phi_k - int phi_j Lambda psi_k|-type
  // defect: |<N_k, D_j> - <D_k, N_j>| relative to the largest term.
  double pairing_defect() const;
};

std::shared_ptr<const TriangularMesh> make_disc_mesh(double h);

FemSolution solve_dirichlet(const FemOperator& op, const BoundaryTrace& phi);
FemSolution solve_dirichlet(const TensorFunction& sigma, const BoundaryTrace& phi, double h);

// Energy-form assembly through 2N+1 real Dirichlet solves.
DtnMatrix dtn_matrix(const FemOperator& op, int cutoff, const std::string& sigma_spec = {});
DtnMatrix dtn_matrix(const ConductivityModel& sigma, double h, int cutoff);
// Same assembly with boundary data exp(i n angles[k]) on all_boundary()[k].
DtnMatrix dtn_matrix_from_angles(const FemOperator& op, const std::vector<double>& angles, int cutoff,
                                 const std::string& sigma_spec = {});

// 2 pi phi^H Lambda phi for a real trace.
double quadratic_form(const DtnMatrix& lambda, const BoundaryTrace& phi);

// Conjugate with grad uhat = J sigma grad u, solved as the Neumann problem for
// sigma/det sigma whose weak load is  integral (J grad u) . grad v. Zero
// boundary mean. hat_op must be built on the same mesh with sigma/det sigma.
FemSolution conjugate_solution(const FemOperator& hat_op, const FemSolution& u);
// L2 norm of grad uhat - J sigma grad u relative to that of grad u.
double conjugate_defect(const FemOperator& op, const FemSolution& u, const FemSolution& uhat);

// H = D^{-1} Lambda with D = diag(i n), row and column 0 set to zero.
Eigen::MatrixXcd hilbert_matrix(const DtnMatrix& lambda);
BoundaryTrace hilbert_transform(const DtnMatrix& lambda, const BoundaryTrace& phi);

CauchyDataSet cauchy_data(const DtnMatrix& lambda);

// Lambda~ = T^H Lambda T with T_kn = (1/2pi) int exp(i n h^{-1}(t)) exp(-i k t) dt,
// evaluated with the substitution t = h(s). h maps the new boundary
// parameter to the old one.
DtnMatrix transform_dtn(const DtnMatrix& lambda, const CircleHomeomorphism& h, int cutoff);

// Pseudo-inverse on the zero-mean modes, zero row and column at n = 0.
Eigen::MatrixXcd ntd_matrix(const DtnMatrix& lambda);

// CSV: '#' header lines, then one row per m with re,im pairs for each n.
void write_dtn_csv(const std::filesystem::path& path, const Eigen::MatrixXcd& m, const std::string& kind,
                   const std::string& sigma_spec, double mesh_h);
void write_dtn_csv(const std::filesystem::path& path, const DtnMatrix& lambda);
DtnMatrix read_dtn_csv(const std::filesystem::path& path);
void write_cauchy_csv(const std::filesystem::path& path, const CauchyDataSet& data, const std::string& sigma_spec);
CauchyDataSet read_cauchy_csv(const std::filesystem::path& path);

}  // namespace calderon::dtn
