#include "calderon/fem.hpp"

#include <cmath>
#include <sstream>

namespace calderon::dtn {

FemOperator::FemOperator(std::shared_ptr<const TriangularMesh> mesh, const TensorFunction& sigma)
    : mesh_(std::move(mesh)) {
  const auto& M = *mesh_;
  const std::size_t nt = M.triangles.size();
  element_sigma_.resize(nt);
  grad_basis_.resize(nt);
  areas_.resize(nt);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = M.triangles[t];
    const Eigen::Vector2d p0 = M.vertices[tri[0]], p1 = M.vertices[tri[1]], p2 = M.vertices[tri[2]];
    const double A = M.triangle_area(t);
    if (!(A > 0.0)) throw InvalidInput("FemOperator: degenerate or inverted triangle");
    areas_[t] = A;
    Eigen::Matrix<double, 3, 2> G;
    // grad lambda_i = rot(p_{i+2} - p_{i+1}) / (2A)
    const Eigen::Vector2d e0 = p2 - p1, e1 = p0 - p2, e2 = p1 - p0;
    G.row(0) << -e0.y(), e0.x();
    G.row(1) << -e1.y(), e1.x();
    G.row(2) << -e2.y(), e2.x();
    G /= 2.0 * A;
    grad_basis_[t] = G;
    SymTensor s{0.0, 0.0, 0.0};
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d m = 0.5 * (M.vertices[tri[e]] + M.vertices[tri[(e + 1) % 3]]);
      s = s + sigma(Complex(m.x(), m.y())) * (1.0 / 3.0);
    }
    auto [lo, hi] = s.eigenvalues();
    if (!(lo > 0.0)) {
      std::ostringstream os;
      os << "FemOperator: conductivity not positive definite on triangle " << t << " (eigenvalues " << lo << ", "
         << hi << ")";
      throw InvalidInput(os.str());
    }
    element_sigma_[t] = s;
    const Eigen::Matrix3d Ke = A * G * s.matrix() * G.transpose();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], Ke(i, j));
  }
  const int nv = int(M.vertices.size());
  K_.resize(nv, nv);
  K_.setFromTriplets(trip.begin(), trip.end());
}

void FemOperator::factor_dirichlet() const {
  std::call_once(dirichlet_once_, [this] {
    const int nv = int(mesh_->vertices.size());
    bnd_nodes_ = mesh_->all_boundary();
    std::vector<int> is_bnd(nv, -1);
    for (std::size_t k = 0; k < bnd_nodes_.size(); ++k) is_bnd[bnd_nodes_[k]] = int(k);
    free_index_.assign(nv, -1);
    int nf = 0;
    for (int v = 0; v < nv; ++v)
      if (is_bnd[v] < 0) free_index_[v] = nf++;
    std::vector<Eigen::Triplet<double>> ii, ib;
    for (int c = 0; c < K_.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K_, c); it; ++it) {
        const int r = int(it.row()), col = int(it.col());
        if (free_index_[r] < 0) continue;
        if (free_index_[col] >= 0) ii.emplace_back(free_index_[r], free_index_[col], it.value());
        else ib.emplace_back(free_index_[r], is_bnd[col], it.value());
      }
    Eigen::SparseMatrix<double> Kii(nf, nf);
    Kii.setFromTriplets(ii.begin(), ii.end());
    K_ib_.resize(nf, int(bnd_nodes_.size()));
    K_ib_.setFromTriplets(ib.begin(), ib.end());
    dirichlet_solver_.compute(Kii);
    if (dirichlet_solver_.info() != Eigen::Success) throw NumericalFailure("FemOperator: interior stiffness is singular");
  });
}

Eigen::MatrixXd FemOperator::solve_dirichlet(const Eigen::MatrixXd& boundary_values) const {
  factor_dirichlet();
  if (boundary_values.rows() != Eigen::Index(bnd_nodes_.size()))
    throw InvalidInput("solve_dirichlet: boundary data has the wrong number of rows");
  const Eigen::MatrixXd rhs = -(K_ib_ * boundary_values);
  const Eigen::MatrixXd ui = dirichlet_solver_.solve(rhs);
  if (dirichlet_solver_.info() != Eigen::Success) throw NumericalFailure("solve_dirichlet: back substitution failed");
  const int nv = int(mesh_->vertices.size());
  Eigen::MatrixXd u(nv, boundary_values.cols());
  for (int v = 0; v < nv; ++v)
    if (free_index_[v] >= 0) u.row(v) = ui.row(free_index_[v]);
  for (std::size_t k = 0; k < bnd_nodes_.size(); ++k) u.row(bnd_nodes_[k]) = boundary_values.row(Eigen::Index(k));
  return u;
}

void FemOperator::factor_neumann() const {
  std::call_once(neumann_once_, [this] {
    const int nv = int(mesh_->vertices.size());
    // pin a vertex far from the boundary
    pinned_ = 0;
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < K_.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K_, c); it; ++it) {
        if (it.row() == pinned_ || it.col() == pinned_) continue;
        trip.emplace_back(it.row() - (it.row() > pinned_), it.col() - (it.col() > pinned_), it.value());
      }
    Eigen::SparseMatrix<double> Kr(nv - 1, nv - 1);
    Kr.setFromTriplets(trip.begin(), trip.end());
    neumann_solver_.compute(Kr);
    if (neumann_solver_.info() != Eigen::Success) throw NumericalFailure("FemOperator: reduced Neumann matrix is singular");
  });
}

Eigen::VectorXd FemOperator::solve_neumann(const Eigen::VectorXd& load) const {
  const int nv = int(mesh_->vertices.size());
  if (load.size() != nv) throw InvalidInput("solve_neumann: load has the wrong size");
  if (std::abs(load.sum()) > 1e-9 * std::max(1.0, load.cwiseAbs().sum()))
    throw InvalidInput("solve_neumann: load is not compatible (nonzero total flux)");
  factor_neumann();
  Eigen::VectorXd r(nv - 1);
  for (int v = 0, k = 0; v < nv; ++v)
    if (v != pinned_) r(k++) = load(v);
  const Eigen::VectorXd x = neumann_solver_.solve(r);
  Eigen::VectorXd u(nv);
  for (int v = 0, k = 0; v < nv; ++v) u(v) = v == pinned_ ? 0.0 : x(k++);
  u.array() -= boundary_mean(u);
  return u;
}

double FemOperator::boundary_mean(const Eigen::VectorXd& u) const {
  const auto& b = mesh_->boundary;
  double s = 0.0, w = 0.0;
  const std::size_t m = b.size();
  for (std::size_t k = 0; k < m; ++k) {
    double wk = 1.0;
    if (!mesh_->closed && (k == 0 || k + 1 == m)) wk = 0.5;
    s += wk * u(b[k]);
    w += wk;
  }
  return s / w;
}

std::vector<Eigen::Vector2d> FemOperator::gradients(const Eigen::VectorXd& u) const {
  std::vector<Eigen::Vector2d> g(mesh_->triangles.size());
  for (std::size_t t = 0; t < g.size(); ++t) {
    const auto& tri = mesh_->triangles[t];
    const Eigen::Vector3d ue(u(tri[0]), u(tri[1]), u(tri[2]));
    g[t] = grad_basis_[t].transpose() * ue;
  }
  return g;
}

Eigen::VectorXd FemOperator::load_from_flux(const std::vector<Eigen::Vector2d>& w) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(Eigen::Index(mesh_->vertices.size()));
  for (std::size_t t = 0; t < w.size(); ++t) {
    const auto& tri = mesh_->triangles[t];
    const Eigen::Vector3d c = areas_[t] * grad_basis_[t] * w[t];
    for (int i = 0; i < 3; ++i) f(tri[i]) += c(i);
  }
  return f;
}

}  // namespace calderon::dtn
