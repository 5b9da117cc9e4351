#include "calderon/cgo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "gmres.hpp"

namespace calderon::cgo {

namespace {

double rate(const std::vector<double>& inc, std::size_t window) {
  if (inc.size() < window + 1) return 0.0;
  const std::size_t b = inc.size() - 1, a = b - window;
  if (inc[a] <= 0.0) return 0.0;
  return std::pow(inc[b] / inc[a], 1.0 / double(window));
}

}  // namespace

Complex CgoSolution::normalized(Complex z) const {
  const GridSpec& g = m.grid();
  if (std::abs(z.real()) <= g.half_width - 0.5 * g.cell() && std::abs(z.imag()) <= g.half_width - 0.5 * g.cell())
    return m.interpolate(z);
  Complex s = 0.0, zp = 1.0 / z;
  for (const Complex& mp : moments) {
    s += mp * zp;
    zp /= z;
  }
  return 1.0 + s / kPi;
}

Complex CgoSolution::w(Complex z) const { return std::exp(kI * k * z) * normalized(z); }

std::string CgoSolution::report() const {
  std::ostringstream os;
  os << "k=" << k.real() << (k.imag() < 0 ? "" : "+") << k.imag() << "i\nmethod=" << method << "\niterations=" << iterations
     << "\nresidual=" << residual << "\nnormalization_defect=" << normalization_defect
     << "\nmultipole_tail=" << multipole_tail << "\n";
  return os.str();
}

RealField mu2_from_isotropic(const RealField& sigma_tilde) {
  RealField out(sigma_tilde.grid());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const double s = sigma_tilde[c];
    if (!(s > 0.0)) throw InvalidInput("mu2_from_isotropic: conductivity must be positive");
    out[c] = (1.0 - s) / (1.0 + s);
  }
  return out;
}

CgoSolution solve_cgo(const RealField& mu2, Complex k, const CgoOptions& opts) {
  SpectralTransform t(mu2.grid(), TorusMode::FreeSpace);
  return solve_cgo(t, mu2, k, opts);
}

CgoSolution solve_cgo(const SpectralTransform& transform, const RealField& mu2, Complex k, const CgoOptions& opts) {
  const GridSpec& grid = mu2.grid();
  if (!(grid == transform.grid())) throw InvalidInput("solve_cgo: grid mismatch");
  const std::size_t n = grid.size();
  std::vector<std::size_t> supp;
  double kappa = 0.0;
  for (std::size_t c = 0; c < n; ++c)
    if (mu2[c] != 0.0) {
      supp.push_back(c);
      kappa = std::max(kappa, std::abs(mu2[c]));
    }
  if (!(kappa < 1.0)) {
    std::ostringstream os;
    os << "solve_cgo: sup|mu2| = " << kappa << " is not below 1";
    throw InvalidInput(os.str());
  }

  CgoSolution sol;
  sol.k = k;
  sol.q = ComplexField(grid);
  sol.m = ComplexField(grid);
  for (auto& v : sol.m.values()) v = 1.0;
  sol.moments.assign(std::size_t(opts.multipole_order + 1), 0.0);
  if (supp.empty() || k == 0.0) {
    sol.method = "exact";
    return sol;
  }

  const Complex ik = kI * k;
  std::vector<Complex> coef(supp.size());  // mu2 exp(-2i Re(kz))
  for (std::size_t s = 0; s < supp.size(); ++s) {
    const Complex z = grid.point(supp[s]);
    coef[s] = mu2[supp[s]] * std::polar(1.0, -2.0 * (k * z).real());
  }
  ComplexField q(grid), cq(grid), sq(grid);
  // T(q) = coef conj(ik (1 + C q) + S q)
  auto image = [&](const ComplexField& in, bool affine, std::vector<Complex>& out) {
    transform.cauchy_beurling(in, &cq, &sq);
    out.resize(supp.size());
    for (std::size_t s = 0; s < supp.size(); ++s) {
      const std::size_t c = supp[s];
      out[s] = coef[s] * std::conj(ik * ((affine ? 1.0 : 0.0) + cq[c]) + sq[c]);
    }
  };

  std::vector<Complex> next;
  std::vector<double> inc;
  bool converged = false;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    image(q, true, next);
    double diff = 0.0, norm = 0.0;
    for (std::size_t s = 0; s < supp.size(); ++s) {
      diff += std::norm(next[s] - q[supp[s]]);
      norm += std::norm(next[s]);
      q[supp[s]] = next[s];
    }
    inc.push_back(std::sqrt(diff / std::max(norm, 1e-300)));
    sol.iterations = it;
    if (inc.back() <= opts.tol) {
      converged = true;
      break;
    }
    const double r = rate(inc, 10);
    const double best = *std::min_element(inc.begin(), inc.end());
    if (it >= 20 && (r > 0.97 || inc.back() > 1e3 * best || !std::isfinite(inc.back()))) break;
  }
  sol.method = "fixed-point";

  if (!converged) {
    // real-linear system (I - L) q = coef conj(ik), unknowns (Re q, Im q) on the support
    const Eigen::Index m = Eigen::Index(supp.size());
    ComplexField tmp(grid);
    auto apply = [&](const Eigen::VectorXd& x) {
      for (Eigen::Index s = 0; s < m; ++s) tmp[supp[s]] = Complex(x(s), x(m + s));
      image(tmp, false, next);
      Eigen::VectorXd y(2 * m);
      for (Eigen::Index s = 0; s < m; ++s) {
        const Complex v = tmp[supp[s]] - next[s];
        y(s) = v.real();
        y(m + s) = v.imag();
      }
      return y;
    };
    Eigen::VectorXd b(2 * m), x = Eigen::VectorXd::Zero(2 * m);
    for (Eigen::Index s = 0; s < m; ++s) {
      const Complex v = coef[s] * std::conj(ik);
      b(s) = v.real();
      b(m + s) = v.imag();
    }
    const bool finite = std::all_of(q.values().begin(), q.values().end(), [](Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    if (finite && inc.back() < 1.0)
      for (Eigen::Index s = 0; s < m; ++s) {
        x(s) = q[supp[s]].real();
        x(m + s) = q[supp[s]].imag();
      }
    const auto gr = detail::gmres(apply, b, x, 0.1 * opts.tol, opts.gmres_restart, opts.gmres_max_iterations);
    sol.iterations += gr.iterations;
    for (auto& v : q.values()) v = 0.0;
    for (Eigen::Index s = 0; s < m; ++s) q[supp[s]] = Complex(x(s), x(m + s));
    sol.method = "gmres";
  }

  image(q, true, next);
  double r = 0.0, d = 0.0;
  for (std::size_t s = 0; s < supp.size(); ++s) {
    const std::size_t c = supp[s];
    r += std::norm(q[c] - next[s]);
    d += std::norm(ik * (1.0 + cq[c]) + sq[c]);
  }
  sol.residual = std::sqrt(r / std::max(d, 1e-300));
  for (std::size_t c = 0; c < n; ++c) sol.m[c] = 1.0 + cq[c];
  sol.q = q;

  const double area = grid.cell_area();
  for (std::size_t c : supp) {
    const Complex z = grid.point(c);
    Complex zp = 1.0;
    for (auto& mp : sol.moments) {
      mp += q[c] * zp * area;
      zp *= z;
    }
  }
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      if (i != 0 && j != 0 && i != grid.n - 1 && j != grid.n - 1) continue;
      const std::size_t c = grid.index(i, j);
      const Complex z = grid.point(c);
      Complex s = 0.0, zp = 1.0 / z;
      for (const Complex& mp : sol.moments) {
        s += mp * zp;
        zp /= z;
      }
      sol.normalization_defect = std::max(sol.normalization_defect, std::abs(cq[c]));
      sol.multipole_tail = std::max(sol.multipole_tail, std::abs(cq[c] - s / kPi));
    }
  if (!(sol.residual <= opts.tol)) {
    std::ostringstream os;
    os << "solve_cgo: residual " << sol.residual << " above tolerance " << opts.tol << " at k = " << k
       << " (method " << sol.method << ", " << sol.iterations << " iterations); reduce |k|";
    throw NumericalFailure(os.str());
  }
  return sol;
}

// ---------------------------------------------------------------- exterior

Complex ExteriorCgo::normalized(Complex z) const {
  Complex s = 0.0;
  const Complex w = 1.0 / z;
  for (Eigen::Index j = laurent.size() - 1; j >= 0; --j) s = (s + laurent(j)) * w;
  return 1.0 + s;
}

Complex ExteriorCgo::evaluate(Complex z) const { return std::exp(kI * k * z) * normalized(z); }

Complex ExteriorCgo::log_normalized(Complex z) const {
  const double r = std::abs(z);
  if (r < 1.0 - 1e-12) throw InvalidInput("log_normalized: point inside the unit disc");
  double R = std::max(8.0, 4.0 * r);
  for (;;) {
    double tail = 0.0;
    for (Eigen::Index j = 0; j < laurent.size(); ++j) tail += std::abs(laurent(j)) * std::pow(R, -double(j + 1));
    if (tail < 0.25) break;
    R *= 2.0;
    if (R > 1e12) throw NumericalFailure("log_normalized: Laurent tail does not decay");
  }
  const Complex dir = z / r;
  Complex prev = normalized(R * dir);
  Complex lg = std::log(prev);
  double cur = R, step = 0.02 * R;
  while (cur > r) {
    const double nxt = std::max(r, cur - step);
    const Complex val = normalized(nxt * dir);
    if (val == 0.0) throw NumericalFailure("log_normalized: G vanishes on the ray");
    const Complex d = std::log(val / prev);
    if (std::abs(d.imag()) > 0.5) {
      step *= 0.5;
      if (step < 1e-9 * r) throw NumericalFailure("log_normalized: winding of G along the ray");
      continue;
    }
    lg += d;
    prev = val;
    cur = nxt;
    step = std::min(0.05 * cur + 1e-3, step * 1.5);
  }
  return lg;
}

BoundaryTrace ExteriorCgo::trace(int cutoff) const {
  const int M = std::max(512, 8 * cutoff);
  std::vector<Complex> s(M);
  for (int j = 0; j < M; ++j) s[j] = evaluate(std::polar(1.0, 2.0 * kPi * j / M));
  return BoundaryTrace::from_samples(s, cutoff);
}

ExteriorCgo solve_G_from_boundary_data(const Eigen::MatrixXcd& hilbert, Complex k, int laurent_terms, double tol) {
  if (hilbert.rows() != hilbert.cols() || hilbert.rows() % 2 == 0)
    throw InvalidInput("solve_G_from_boundary_data: Hilbert matrix must be square of odd size");
  const int N = int(hilbert.rows() - 1) / 2;
  const int J = laurent_terms > 0 ? laurent_terms : N;
  ExteriorCgo out;
  out.k = k;
  out.laurent = Eigen::VectorXcd::Zero(J);
  if (k == 0.0 || N == 0) return out;

  const int K2 = 2 * N;
  int M = 256;
  while (M < 8 * (K2 + J) || M < 16 * int(std::abs(k)) + 64) M *= 2;
  auto coeffs = [&](int j) {
    std::vector<Complex> s(M);
    for (int t = 0; t < M; ++t) {
      const double th = 2.0 * kPi * t / M;
      s[t] = std::exp(kI * k * std::polar(1.0, th)) * std::polar(1.0, -j * th);
    }
    return BoundaryTrace::from_samples(s, K2);
  };
  // residual modes n = 1..N of Im G - H Re G, stacked as (re, im)
  auto defect = [&](const BoundaryTrace& g) {
    Eigen::VectorXcd re(2 * N + 1);
    for (int m = -N; m <= N; ++m) re(m + N) = 0.5 * (g[m] + std::conj(g[-m]));
    const Eigen::VectorXcd hre = hilbert * re;
    Eigen::VectorXd r(2 * N);
    for (int n = 1; n <= N; ++n) {
      const Complex im = (g[n] - std::conj(g[-n])) / (2.0 * kI);
      const Complex v = im - hre(n + N);
      r(2 * (n - 1)) = v.real();
      r(2 * (n - 1) + 1) = v.imag();
    }
    return r;
  };
  std::vector<BoundaryTrace> B;
  for (int j = 0; j <= J; ++j) B.push_back(coeffs(j));
  Eigen::MatrixXd A(2 * N, 2 * J);
  for (int j = 1; j <= J; ++j) {
    BoundaryTrace bi(K2);
    for (int m = -K2; m <= K2; ++m) bi[m] = kI * B[j][m];
    A.col(2 * (j - 1)) = defect(B[j]);
    A.col(2 * (j - 1) + 1) = defect(bi);
  }
  const Eigen::VectorXd rhs = -defect(B[0]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  const Eigen::VectorXd x = svd.solve(rhs);
  for (int j = 0; j < J; ++j) out.laurent(j) = Complex(x(2 * j), x(2 * j + 1));

  BoundaryTrace g(K2);
  for (int m = -K2; m <= K2; ++m) {
    Complex v = B[0][m];
    for (int j = 1; j <= J; ++j) v += out.laurent(j - 1) * B[j][m];
    g[m] = v;
  }
  double low = 0.0, high = 0.0;
  for (int m = -K2; m <= K2; ++m) {
    const double re = std::norm(0.5 * (g[m] + std::conj(g[-m])));
    (std::abs(m) <= N ? low : high) += re;
  }
  out.boundary_defect = defect(g).norm() / std::sqrt(std::max(low, 1e-300));
  out.spectral_tail = std::sqrt(high / std::max(low, 1e-300));
  if (!(out.boundary_defect <= tol)) {
    std::ostringstream os;
    os << "solve_G_from_boundary_data: boundary defect " << out.boundary_defect << " above " << tol
       << " (condition estimate " << out.condition << ")";
    throw NumericalFailure(os.str());
  }
  return out;
}

GluedExtension glue_interior_extension(const SpectralTransform& transform, const ExteriorCgo& g,
                                       const ComplexField& nu1, const RealField& nu2, int cutoff,
                                       const beltrami::SolverOptions& opts) {
  const GridSpec& grid = transform.grid();
  const auto inner = beltrami::solve_linear_beltrami(transform, nu1, nu2, g.trace(cutoff), 1.0, opts);
  GluedExtension out;
  out.values = ComplexField(grid);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Complex z = grid.point(c);
    out.values[c] = std::abs(z) < 1.0 ? inner.g[c] : g.evaluate(z);
  }
  out.trace_mismatch = inner.trace_mismatch;
  out.residual = inner.residual;
  if (!(out.trace_mismatch <= 1e-2)) {
    std::ostringstream os;
    os << "glue_interior_extension: trace mismatch " << out.trace_mismatch;
    throw NumericalFailure(os.str());
  }
  return out;
}

// ---------------------------------------------------------------- phase

PhaseFunction extract_phase(const CgoSolution& w) {
  const ComplexField& m = w.m;
  const GridSpec& grid = m.grid();
  PhaseFunction out;
  out.k = w.k;
  out.phi = ComplexField(grid);
  for (std::size_t c = 0; c < grid.size(); ++c)
    if (m[c] == 0.0) {
      std::ostringstream os;
      os << "extract_phase: W vanishes at cell " << c << " (z = " << grid.point(c) << ")";
      throw NumericalFailure(os.str());
    }
  ComplexField lg(grid);
  auto step = [&](std::size_t from, std::size_t to) {
    const Complex d = std::log(m[to] / m[from]);
    if (std::abs(d.imag()) > kPi / 2) {
      std::ostringstream os;
      os << "extract_phase: phase jump " << d.imag() << " between cells " << from << " and " << to;
      throw NumericalFailure(os.str());
    }
    lg[to] = lg[from] + d;
  };
  lg[grid.index(0, 0)] = std::log(m[grid.index(0, 0)]);
  for (int i = 1; i < grid.n; ++i) step(grid.index(i - 1, 0), grid.index(i, 0));
  for (int i = 0; i < grid.n; ++i)
    for (int j = 1; j < grid.n; ++j) step(grid.index(i, j - 1), grid.index(i, j));
  // horizontal consistency: the unwrapped field must not wind
  for (int j = 1; j < grid.n; ++j)
    for (int i = 1; i < grid.n; ++i) {
      const std::size_t a = grid.index(i - 1, j), b = grid.index(i, j);
      if (std::abs((lg[b] - lg[a]).imag()) > kPi) {
        std::ostringstream os;
        os << "extract_phase: branch inconsistency near z = " << grid.point(b) << " (W winds)";
        throw NumericalFailure(os.str());
      }
    }
  const Complex ik = kI * w.k;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Complex z = grid.point(c);
    out.phi[c] = w.k == 0.0 ? z : z + lg[c] / ik;
    out.reconstruction_error = std::max(out.reconstruction_error, std::abs(std::exp(lg[c]) - m[c]) / std::abs(m[c]));
    out.deviation = std::max(out.deviation, std::abs(out.phi[c] - z));
  }
  return out;
}

// ---------------------------------------------------------------- recovery

std::vector<double> default_k_schedule() { return {1.0, 2.0, 4.0, 8.0}; }

std::string ExteriorRecovery::report() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < max_error_by_k.size(); ++i) os << "max_error[" << i << "]=" << max_error_by_k[i] << "\n";
  for (std::size_t i = 0; i < boundary_defect_by_k.size(); ++i)
    os << "boundary_defect[" << i << "]=" << boundary_defect_by_k[i] << "\n";
  os << "error_monotone=" << (error_monotone ? "true" : "false") << "\n";
  return os.str();
}

ExteriorRecovery recover_F_exterior(const dtn::DtnMatrix& lambda, std::span<const Complex> points,
                                    std::span<const double> k_schedule, double ray_angle,
                                    const std::function<Complex(Complex)>& truth, int laurent_terms) {
  for (const Complex& z : points)
    if (!(std::abs(z) > 1.0)) throw InvalidInput("recover_F_exterior: sample points must lie outside the unit disc");
  for (std::size_t i = 1; i < k_schedule.size(); ++i)
    if (!(k_schedule[i] > k_schedule[i - 1])) throw InvalidInput("recover_F_exterior: k schedule must increase");
  const Eigen::MatrixXcd H = dtn::hilbert_matrix(lambda);
  ExteriorRecovery out;
  for (double kabs : k_schedule) {
    const Complex k = std::polar(kabs, ray_angle);
    const ExteriorCgo g = solve_G_from_boundary_data(H, k, laurent_terms, 1e-6);
    out.boundary_defect_by_k.push_back(g.boundary_defect);
    double worst = 0.0;
    for (const Complex& z : points) {
      RecoverySample s{z, kabs, z + g.log_normalized(z) / (kI * k), -1.0};
      if (truth) {
        s.error = std::abs(s.estimate - truth(z));
        worst = std::max(worst, s.error);
      }
      out.samples.push_back(s);
    }
    if (truth) {
      if (!out.max_error_by_k.empty() && worst > out.max_error_by_k.back()) out.error_monotone = false;
      out.max_error_by_k.push_back(worst);
    }
  }
  return out;
}

std::vector<Complex> recover_F_directional(const dtn::DtnMatrix& lambda, std::span<const Complex> points, double k,
                                           const DirectionalOptions& opts) {
  if (opts.rays < 1 || !(k > 0.0)) throw InvalidInput("recover_F_directional: need rays >= 1 and k > 0");
  for (const Complex& z : points)
    if (!(std::abs(z) >= 1.0 - 1e-12)) throw InvalidInput("recover_F_directional: sample points must lie outside the unit disc");
  const Eigen::MatrixXcd H = dtn::hilbert_matrix(lambda);
  std::vector<ExteriorCgo> g;
  for (int r = 0; r < opts.rays; ++r)
    g.push_back(solve_G_from_boundary_data(H, std::polar(k, 2.0 * kPi * r / opts.rays), opts.laurent_terms, 1e-6));
  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Complex z = points[i];
    Complex acc = 0.0;
    double wsum = 0.0;
    for (int r = 0; r < opts.rays; ++r) {
      const double c = std::cos(std::arg(z) + kPi / 2 + std::arg(g[r].k));
      if (c <= 0.0) continue;
      const double w = std::pow(c, opts.weight_power);
      acc += w * (z + g[r].log_normalized(z) / (kI * g[r].k));
      wsum += w;
    }
    out[i] = acc / wsum;
  }
  return out;
}

std::vector<Complex> recover_boundary_map(const dtn::DtnMatrix& lambda, double k, int samples,
                                          const BoundaryRecoveryOptions& opts) {
  const int M = opts.ring_samples;
  const double R = opts.ring_radius;
  if (!(R > 1.0) || opts.laurent_order < 1 || M < 4 * opts.laurent_order || samples < 1)
    throw InvalidInput("recover_boundary_map: need ring_radius > 1 and ring_samples >= 4 laurent_order");
  std::vector<Complex> ring(M);
  for (int j = 0; j < M; ++j) ring[j] = std::polar(R, 2.0 * kPi * j / M);
  const std::vector<Complex> v = recover_F_directional(lambda, ring, k, opts.directional);
  std::vector<Complex> c(opts.laurent_order + 1, 0.0);
  for (int p = 1; p <= opts.laurent_order; ++p) {
    Complex s = 0.0;
    for (int j = 0; j < M; ++j) s += (v[j] - ring[j]) * std::polar(1.0, 2.0 * kPi * p * j / M);
    c[p] = s / double(M) * std::pow(R, p);
  }
  std::vector<Complex> out(samples);
  for (int j = 0; j < samples; ++j) {
    const Complex z = std::polar(1.0, 2.0 * kPi * j / samples);
    Complex f = z, zp = 1.0;
    for (int p = 1; p <= opts.laurent_order; ++p) {
      zp /= z;
      f += c[p] * zp;
    }
    out[j] = f;
  }
  return out;
}

double ImageBoundary::rho(double image_angle) const {
  return radius.evaluate(to_source.evaluate(image_angle)).real();
}

ImageBoundary image_boundary(std::span<const Complex> samples, int radius_cutoff) {
  const int M = int(samples.size());
  if (M < 4 * radius_cutoff + 1) throw InvalidInput("image_boundary: too few samples");
  std::vector<double> lift(M);
  std::vector<Complex> rad(M);
  for (int j = 0; j < M; ++j) {
    double a = std::arg(samples[j]);
    if (j > 0) {
      while (a < lift[j - 1] - kPi) a += 2.0 * kPi;
      while (a > lift[j - 1] + kPi) a -= 2.0 * kPi;
    }
    lift[j] = a;
    rad[j] = std::abs(samples[j]);
  }
  CircleHomeomorphism g(std::move(lift));
  return {g.inverse(), BoundaryTrace::from_samples(rad, radius_cutoff)};
}

dtn::DtnMatrix recover_dtn_isotropic(const dtn::DtnMatrix& lambda, std::span<const Complex> boundary_samples,
                                     int cutoff) {
  const ImageBoundary ib = image_boundary(boundary_samples, std::min(64, int(boundary_samples.size() - 1) / 4));
  return dtn::transform_dtn(lambda, ib.to_source, cutoff);
}

dtn::DtnMatrix image_dtn(const beltrami::Isotropization& iso, const TensorFunction& sigma, double h, int cutoff,
                         int boundary_samples) {
  const DiffeoMap& f = iso.principal.map;
  std::vector<Complex> b(boundary_samples);
  for (int j = 0; j < boundary_samples; ++j) b[j] = f.evaluate(std::polar(1.0, 2.0 * kPi * j / boundary_samples));
  const ImageBoundary ib = image_boundary(b, std::min(64, (boundary_samples - 1) / 4));
  auto mesh = std::make_shared<const dtn::TriangularMesh>(dtn::star_mesh(h, [&](double a) { return ib.rho(a); }));
  TensorFunction st = [&](Complex y) { return SymTensor::isotropic(std::sqrt(sigma(f.inverse(y)).det())); };
  return dtn::dtn_matrix(dtn::FemOperator(mesh, st), cutoff, "image");
}

}  // namespace calderon::cgo
