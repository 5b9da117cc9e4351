#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "calderon/conductivity.hpp"
#include "calderon/mesh.hpp"

namespace calderon::dtn {

// P1 stiffness operator for div(sigma grad u) = 0. The element tensor is the
// mean of sigma at the three edge midpoints.
class FemOperator {
 public:
  FemOperator(std::shared_ptr<const TriangularMesh> mesh, const TensorFunction& sigma);

  const TriangularMesh& mesh() const noexcept { return *mesh_; }
  const std::shared_ptr<const TriangularMesh>& mesh_ptr() const noexcept { return mesh_; }
  const Eigen::SparseMatrix<double>& stiffness() const noexcept { return K_; }
  const SymTensor& element_sigma(std::size_t t) const noexcept { return element_sigma_[t]; }

  // Dirichlet values on mesh().all_boundary() (one column per case); returns
  // nodal solutions. Interior rows of K u vanish.
  Eigen::MatrixXd solve_dirichlet(const Eigen::MatrixXd& boundary_values) const;
  // Pure Neumann problem K u = load, normalized to zero mean over the curved
  // boundary. The load must sum to zero.
  Eigen::VectorXd solve_neumann(const Eigen::VectorXd& load) const;

  double energy(const Eigen::VectorXd& u) const { return u.dot(K_ * u); }
  Eigen::VectorXd residual(const Eigen::VectorXd& u) const { return K_ * u; }
  // Constant gradient of u on each triangle.
  std::vector<Eigen::Vector2d> gradients(const Eigen::VectorXd& u) const;
  // Load vector of the form  integral  w . grad v  for piecewise constant w.
  Eigen::VectorXd load_from_flux(const std::vector<Eigen::Vector2d>& w) const;
  // Zero mean over the curved boundary with angle-trapezoid weights.
  double boundary_mean(const Eigen::VectorXd& u) const;

 private:
  void factor_dirichlet() const;
  void factor_neumann() const;

  std::shared_ptr<const TriangularMesh> mesh_;
  Eigen::SparseMatrix<double> K_;
  std::vector<SymTensor> element_sigma_;
  std::vector<Eigen::Matrix<double, 3, 2>> grad_basis_;  // rows: gradients of barycentrics
  std::vector<double> areas_;

  mutable std::once_flag dirichlet_once_, neumann_once_;
  mutable std::vector<int> free_index_;   // node -> interior position or -1
  mutable std::vector<int> bnd_nodes_;
  mutable Eigen::SparseMatrix<double> K_ib_;
  mutable Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> dirichlet_solver_;
  mutable Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> neumann_solver_;
  mutable int pinned_ = 0;
};

}  // namespace calderon::dtn
