#include "calderon/dtn.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <Eigen/SVD>

namespace calderon::dtn {

namespace fs = std::filesystem;

DtnMatrix::DtnMatrix(Eigen::MatrixXcd m, std::string sigma_spec, double mesh_h)
    : m_(std::move(m)), spec_(std::move(sigma_spec)), h_(mesh_h) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 == 0) throw InvalidInput("DtN matrix must be square of odd size");
}

DtnMatrix DtnMatrix::truncated(int cutoff) const {
  if (cutoff > this->cutoff()) throw InvalidInput("cannot truncate a DtN matrix to a larger cutoff");
  const int off = this->cutoff() - cutoff;
  return DtnMatrix(m_.block(off, off, 2 * cutoff + 1, 2 * cutoff + 1), spec_, h_);
}

BoundaryTrace DtnMatrix::apply(const BoundaryTrace& phi) const {
  const BoundaryTrace p = phi.resized(cutoff());
  return BoundaryTrace(Eigen::VectorXcd(m_ * p.coefficients()));
}

double DtnMatrix::hermitian_defect() const {
  const double n = m_.norm();
  return n > 0.0 ? (m_ - m_.adjoint()).norm() / n : 0.0;
}

DtnMatrix constant_dtn(double c, int cutoff) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * cutoff + 1, 2 * cutoff + 1);
  for (int n = -cutoff; n <= cutoff; ++n) m(n + cutoff, n + cutoff) = c * std::abs(n);
  std::ostringstream os;
  os << "isotropic " << c << " (exact)";
  return DtnMatrix(m, os.str(), 0.0);
}

double relative_defect(const DtnMatrix& a, const DtnMatrix& reference, int cutoff) {
  const Eigen::MatrixXcd A = a.truncated(cutoff).matrix(), B = reference.truncated(cutoff).matrix();
  return (A - B).norm() / B.norm();
}

BoundaryTrace FemSolution::trace(int cutoff) const {
  if (!mesh->closed) throw InvalidInput("trace needs a closed boundary ring");
  std::vector<Complex> s(mesh->boundary.size());
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = values(mesh->boundary[k]);
  return BoundaryTrace::from_samples(s, cutoff);
}

double CauchyDataSet::pairing_defect() const {
  auto pair = [](const BoundaryTrace& f, const BoundaryTrace& g) {
    const int N = std::min(f.cutoff(), g.cutoff());
    Complex s = 0.0;
    for (int n = -N; n <= N; ++n) s += f[n] * g[-n];
    return s;
  };
  double worst = 0.0, scale = 0.0;
  for (const auto& [dj, nj] : pairs)
    for (const auto& [dk, nk] : pairs) {
      const Complex a = pair(nj, dk), b = pair(dj, nk);
      worst = std::max(worst, std::abs(a - b));
      scale = std::max({scale, std::abs(a), std::abs(b)});
    }
  return scale > 0.0 ? worst / scale : 0.0;
}

std::shared_ptr<const TriangularMesh> make_disc_mesh(double h) {
  return std::make_shared<const TriangularMesh>(disc_mesh(h));
}

FemSolution solve_dirichlet(const FemOperator& op, const BoundaryTrace& phi) {
  const auto& mesh = op.mesh();
  if (!mesh.closed) throw InvalidInput("solve_dirichlet: mesh boundary is not a closed ring");
  if (!phi.is_real(1e-12)) throw InvalidInput("solve_dirichlet: boundary data must be real");
  Eigen::MatrixXd b(mesh.boundary.size(), 1);
  for (std::size_t k = 0; k < mesh.boundary.size(); ++k) b(Eigen::Index(k), 0) = phi.evaluate(mesh.boundary_angle[k]).real();
  return {op.mesh_ptr(), op.solve_dirichlet(b).col(0)};
}

FemSolution solve_dirichlet(const TensorFunction& sigma, const BoundaryTrace& phi, double h) {
  FemOperator op(make_disc_mesh(h), sigma);
  return solve_dirichlet(op, phi);
}

DtnMatrix dtn_matrix(const FemOperator& op, int N, const std::string& sigma_spec) {
  const auto& mesh = op.mesh();
  if (!mesh.closed) throw InvalidInput("dtn_matrix: mesh boundary is not a closed ring");
  return dtn_matrix_from_angles(op, mesh.boundary_angle, N, sigma_spec);
}

DtnMatrix dtn_matrix_from_angles(const FemOperator& op, const std::vector<double>& angles, int N,
                                 const std::string& sigma_spec) {
  const auto& mesh = op.mesh();
  const int nb = int(mesh.all_boundary().size());
  if (int(angles.size()) != nb) throw InvalidInput("dtn_matrix: one angle per boundary vertex required");
  if (N < 0 || 4 * N > nb) {
    std::ostringstream os;
    os << "dtn_matrix: cutoff " << N << " exceeds a quarter of the " << nb << " boundary vertices";
    throw InvalidInput(os.str());
  }
  const std::vector<int> bnd = mesh.all_boundary();
  const int nr = 2 * N + 1;
  Eigen::MatrixXd V(nb, nr);
  for (int k = 0; k < nb; ++k) {
    const double th = angles[k];
    V(k, 0) = 1.0;
    for (int n = 1; n <= N; ++n) {
      V(k, 2 * n - 1) = std::cos(n * th);
      V(k, 2 * n) = std::sin(n * th);
    }
  }
  const Eigen::MatrixXd U = op.solve_dirichlet(V);
  const Eigen::MatrixXd R = op.stiffness() * U;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(nr, nr);
  for (int k = 0; k < nb; ++k) E += V.row(k).transpose() * R.row(bnd[k]);
  E = 0.5 * (E + E.transpose());
  // the constant carries no energy
  const double scale = E.cwiseAbs().maxCoeff();
  if (E.row(0).cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1.0))
    throw NumericalFailure("dtn_matrix: constants are not in the discrete kernel");
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(nr, nr);
  for (int n = -N; n <= N; ++n) {
    const int col = n + N;
    if (n == 0) C(0, col) = 1.0;
    else {
      C(2 * std::abs(n) - 1, col) = 1.0;
      C(2 * std::abs(n), col) = Complex(0.0, n > 0 ? 1.0 : -1.0);
    }
  }
  Eigen::MatrixXcd L = C.adjoint() * E.cast<Complex>() * C / (2.0 * kPi);
  L.row(N).setZero();
  L.col(N).setZero();
  return DtnMatrix(std::move(L), sigma_spec, mesh.h);
}

DtnMatrix dtn_matrix(const ConductivityModel& sigma, double h, int N) {
  FemOperator op(make_disc_mesh(h), sigma.tensor);
  return dtn_matrix(op, N, sigma.spec);
}

double quadratic_form(const DtnMatrix& lambda, const BoundaryTrace& phi) {
  if (!phi.is_real(1e-10)) throw InvalidInput("quadratic_form: trace must be real");
  const Eigen::VectorXcd p = phi.resized(lambda.cutoff()).coefficients();
  return 2.0 * kPi * (p.adjoint() * lambda.matrix() * p)(0, 0).real();
}

FemSolution conjugate_solution(const FemOperator& hat_op, const FemSolution& u) {
  const auto& mesh = hat_op.mesh();
  if (mesh.triangles.size() != u.mesh->triangles.size()) throw InvalidInput("conjugate_solution: mesh mismatch");
  if (!mesh.closed) throw InvalidInput("conjugate_solution: domain boundary must be a single closed ring");
  // Euler characteristic V - E + F = 1 for a disc-like mesh
  {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& t : mesh.triangles)
      for (int e = 0; e < 3; ++e) edges[{std::min(t[e], t[(e + 1) % 3]), std::max(t[e], t[(e + 1) % 3])}] = 1;
    const long chi = long(mesh.vertices.size()) - long(edges.size()) + long(mesh.triangles.size());
    if (chi != 1) throw InvalidInput("conjugate_solution: domain is not simply connected");
  }
  auto g = hat_op.gradients(u.values);
  for (auto& v : g) v = Eigen::Vector2d(-v.y(), v.x());  // J grad u
  const Eigen::VectorXd load = hat_op.load_from_flux(g);
  return {hat_op.mesh_ptr(), hat_op.solve_neumann(load)};
}

double conjugate_defect(const FemOperator& op, const FemSolution& u, const FemSolution& uhat) {
  const auto gu = op.gradients(u.values), gh = op.gradients(uhat.values);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < gu.size(); ++t) {
    const double A = op.mesh().triangle_area(t);
    const Eigen::Vector2d s = op.element_sigma(t).matrix() * gu[t];
    const Eigen::Vector2d js(-s.y(), s.x());
    num += A * (gh[t] - js).squaredNorm();
    den += A * gu[t].squaredNorm();
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Eigen::MatrixXcd hilbert_matrix(const DtnMatrix& lambda) {
  const int N = lambda.cutoff();
  Eigen::MatrixXcd H = lambda.matrix();
  for (int m = -N; m <= N; ++m) {
    if (m == 0) H.row(N).setZero();
    else H.row(m + N) /= Complex(0.0, m);
  }
  H.col(N).setZero();
  return H;
}

BoundaryTrace hilbert_transform(const DtnMatrix& lambda, const BoundaryTrace& phi) {
  const BoundaryTrace p = phi.resized(lambda.cutoff());
  return BoundaryTrace(Eigen::VectorXcd(hilbert_matrix(lambda) * p.coefficients()));
}

CauchyDataSet cauchy_data(const DtnMatrix& lambda) {
  const int N = lambda.cutoff();
  CauchyDataSet set;
  for (int n = -N; n <= N; ++n) {
    BoundaryTrace d = BoundaryTrace::mode(n, N);
    set.pairs.emplace_back(d, lambda.apply(d));
  }
  return set;
}

DtnMatrix transform_dtn(const DtnMatrix& lambda, const CircleHomeomorphism& h, int cutoff) {
  const int Nin = lambda.cutoff();
  const int M = h.size();
  if (M < 4 * std::max(Nin, cutoff)) throw InvalidInput("transform_dtn: boundary map undersampled for the cutoffs");
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * Nin + 1, 2 * cutoff + 1);
  for (int j = 0; j < M; ++j) {
    const double s = h.theta(j), t = h.lift(j), w = h.derivative_at(j) / M;
    for (int n = -cutoff; n <= cutoff; ++n) {
      const Complex en = std::polar(w, n * s);
      for (int k = -Nin; k <= Nin; ++k) T(k + Nin, n + cutoff) += en * std::polar(1.0, -k * t);
    }
  }
  Eigen::MatrixXcd L = T.adjoint() * lambda.matrix() * T;
  L.row(cutoff).setZero();
  L.col(cutoff).setZero();
  return DtnMatrix(std::move(L), lambda.sigma_spec(), lambda.mesh_h());
}

Eigen::MatrixXcd ntd_matrix(const DtnMatrix& lambda) {
  const int N = lambda.cutoff();
  const int d = 2 * N;
  Eigen::MatrixXcd B(d, d);
  auto idx = [N](int n) { return n < 0 ? n + N : n + N - 1; };
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      if (m != 0 && n != 0) B(idx(m), idx(n)) = lambda(m, n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  if (d == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(d - 1) > 1e-12 * sv(0))) {
    std::ostringstream os;
    os << "ntd_matrix: DtN is rank deficient beyond constants (singular values " << sv(0) << " .. " << sv(d - 1) << ")";
    throw NumericalFailure(os.str());
  }
  const Eigen::MatrixXcd inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  for (int m = -N; m <= N; ++m)
    for (int n = -N; n <= N; ++n)
      if (m != 0 && n != 0) out(m + N, n + N) = inv(idx(m), idx(n));
  return out;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::map<std::string, std::string> read_header(std::istream& in, std::vector<std::string>& rows) {
  std::map<std::string, std::string> head;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string k = line.substr(1, eq - 1);
        k.erase(0, k.find_first_not_of(' '));
        head[k] = line.substr(eq + 1);
      }
      continue;
    }
    rows.push_back(line);
  }
  return head;
}

std::vector<double> split_numbers(const std::string& row) {
  std::vector<double> v;
  std::stringstream ss(row);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw IoError("CSV: not a number: '" + cell + "'");
    }
  }
  return v;
}

}  // namespace

void write_dtn_csv(const fs::path& path, const Eigen::MatrixXcd& m, const std::string& kind,
                   const std::string& sigma_spec, double mesh_h) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const int N = int(m.rows() - 1) / 2;
  out << "# kind=" << kind << "\n# sigma=" << sigma_spec << "\n# N=" << N << "\n# h=" << num(mesh_h) << "\n";
  out << "# layout=row m=-N..N, columns n=-N..N as re,im pairs\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << (c ? "," : "") << num(m(r, c).real()) << "," << num(m(r, c).imag());
    out << "\n";
  }
}

void write_dtn_csv(const fs::path& path, const DtnMatrix& lambda) {
  write_dtn_csv(path, lambda.matrix(), "dtn", lambda.sigma_spec(), lambda.mesh_h());
}

DtnMatrix read_dtn_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> rows;
  auto head = read_header(in, rows);
  if (!head.count("N")) throw IoError(path.string() + ": missing N header");
  const int N = std::stoi(head["N"]);
  const int d = 2 * N + 1;
  if (int(rows.size()) != d) throw IoError(path.string() + ": expected " + std::to_string(d) + " rows");
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r) {
    const auto v = split_numbers(rows[r]);
    if (int(v.size()) != 2 * d) throw IoError(path.string() + ": row " + std::to_string(r) + " has wrong length");
    for (int c = 0; c < d; ++c) m(r, c) = {v[2 * c], v[2 * c + 1]};
  }
  return DtnMatrix(m, head["sigma"], head.count("h") ? std::stod(head["h"]) : 0.0);
}

void write_cauchy_csv(const fs::path& path, const CauchyDataSet& data, const std::string& sigma_spec) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# kind=cauchy\n# sigma=" << sigma_spec << "\n# pairs=" << data.pairs.size() << "\n";
  out << "# columns=pair,n,dirichlet_re,dirichlet_im,neumann_re,neumann_im\n";
  for (std::size_t p = 0; p < data.pairs.size(); ++p) {
    const auto& [d, n] = data.pairs[p];
    const int N = std::max(d.cutoff(), n.cutoff());
    const BoundaryTrace dd = d.resized(N), nn = n.resized(N);
    for (int k = -N; k <= N; ++k)
      out << p << "," << k << "," << num(dd[k].real()) << "," << num(dd[k].imag()) << "," << num(nn[k].real()) << ","
          << num(nn[k].imag()) << "\n";
  }
}

CauchyDataSet read_cauchy_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> rows;
  read_header(in, rows);
  std::map<int, std::vector<std::vector<double>>> by_pair;
  for (const auto& r : rows) {
    auto v = split_numbers(r);
    if (v.size() != 6) throw IoError(path.string() + ": Cauchy row must have 6 columns");
    by_pair[int(v[0])].push_back(v);
  }
  CauchyDataSet set;
  for (auto& [p, entries] : by_pair) {
    const int N = int(entries.size() - 1) / 2;
    BoundaryTrace d(N), n(N);
    for (const auto& e : entries) {
      const int k = int(e[1]);
      if (std::abs(k) > N) throw IoError(path.string() + ": mode index out of range");
      d[k] = {e[2], e[3]};
      n[k] = {e[4], e[5]};
    }
    set.pairs.emplace_back(d, n);
  }
  return set;
}

}  // namespace calderon::dtn
