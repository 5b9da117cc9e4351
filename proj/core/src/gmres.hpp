#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace calderon::detail {

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Restarted GMRES with modified Gram-Schmidt and Givens rotations for a
// real operator given as a callback.
inline GmresResult gmres(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                         const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol, int restart, int max_iterations) {
  GmresResult res;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }
  while (res.iterations < max_iterations) {
    Eigen::VectorXd r = b - apply(x);
    double beta = r.norm();
    res.relative_residual = beta / bnorm;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    std::vector<Eigen::VectorXd> V;
    V.push_back(r / beta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(restart), sn = Eigen::VectorXd::Zero(restart);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(restart + 1);
    g(0) = beta;
    int j = 0;
    for (; j < restart && res.iterations < max_iterations; ++j) {
      ++res.iterations;
      Eigen::VectorXd w = apply(V[j]);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = w.dot(V[i]);
        w -= H(i, j) * V[i];
      }
      H(j + 1, j) = w.norm();
      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      const double den = std::hypot(H(j, j), H(j + 1, j));
      cs(j) = den > 0.0 ? H(j, j) / den : 1.0;
      sn(j) = den > 0.0 ? H(j + 1, j) / den : 0.0;
      H(j, j) = den;
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      res.relative_residual = std::abs(g(j + 1)) / bnorm;
      const bool breakdown = !(w.norm() > 1e-300) || den == 0.0;
      if (!breakdown) V.push_back(w / w.norm());
      if (res.relative_residual <= tol || breakdown) {
        ++j;
        break;
      }
    }
    Eigen::VectorXd y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; ++i) x += y(i) * V[i];
  }
  res.relative_residual = (b - apply(x)).norm() / bnorm;
  res.converged = res.relative_residual <= tol;
  return res;
}

}  // namespace calderon::detail
