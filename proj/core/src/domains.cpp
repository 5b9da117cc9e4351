#include "calderon/domains.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "calderon/cgo.hpp"

namespace calderon::domains {

namespace {

template <unsigned N>
void gauss_nodes(std::vector<double>& x, std::vector<double>& w) {
  using Q = boost::math::quadrature::gauss<double, N>;
  const auto& a = Q::abscissa();
  const auto& b = Q::weights();
  x.clear();
  w.clear();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(b[i]);
      continue;
    }
    x.push_back(a[i]);
    w.push_back(b[i]);
    x.push_back(-a[i]);
    w.push_back(b[i]);
  }
}

bool is_identity(const SymTensor& s, double tol = 1e-12) {
  return std::abs(s.s11 - 1.0) <= tol && std::abs(s.s22 - 1.0) <= tol && std::abs(s.s12) <= tol;
}

}  // namespace

// ---------------------------------------------------------------- charts

std::string ConformalChart::name() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::HalfplaneToDisc: return "halfplane";
    case Kind::ExteriorToDisc: return "exterior";
  }
  return "unknown";
}

Complex ConformalChart::map(Complex z) const {
  switch (kind_) {
    case Kind::Identity: return z;
    case Kind::HalfplaneToDisc: return (z + kI) / (z - kI);
    case Kind::ExteriorToDisc: return 1.0 / z;
  }
  return z;
}

Complex ConformalChart::inverse(Complex w) const {
  switch (kind_) {
    case Kind::Identity: return w;
    case Kind::HalfplaneToDisc: return kI * (w + 1.0) / (w - 1.0);
    case Kind::ExteriorToDisc: return 1.0 / w;
  }
  return w;
}

Complex ConformalChart::derivative(Complex z) const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::HalfplaneToDisc: return -2.0 * kI / ((z - kI) * (z - kI));
    case Kind::ExteriorToDisc: return -1.0 / (z * z);
  }
  return 1.0;
}

double ConformalChart::round_trip_error(const std::vector<Complex>& samples) const {
  double e = 0.0;
  for (const Complex& z : samples) e = std::max(e, std::abs(inverse(map(z)) - z) / std::max(1.0, std::abs(z)));
  return e;
}

// ---------------------------------------------------------------- half plane

HalfplaneDtn::HalfplaneDtn(const TensorFunction& sigma, double h, std::string sigma_spec)
    : spec_(std::move(sigma_spec)), h_(h) {
  const dtn::TriangularMesh disc = dtn::disc_mesh(h);
  const int v0 = disc.boundary.front();  // angle 0, the image of infinity
  if (std::abs(disc.boundary_angle.front()) > 1e-14) throw NumericalFailure("HalfplaneDtn: unexpected disc mesh layout");
  const ConformalChart chart = ConformalChart::halfplane();

  std::set<int> star;
  std::vector<std::array<int, 3>> kept;
  for (const auto& t : disc.triangles) {
    if (t[0] == v0 || t[1] == v0 || t[2] == v0) {
      for (int v : t)
        if (v != v0) star.insert(v);
    } else {
      kept.push_back(t);
    }
  }
  std::vector<int> renum(disc.vertices.size(), -1);
  auto mesh = std::make_shared<dtn::TriangularMesh>();
  for (std::size_t v = 0; v < disc.vertices.size(); ++v) {
    if (int(v) == v0) continue;
    renum[v] = int(mesh->vertices.size());
    const Complex w(disc.vertices[v].x(), disc.vertices[v].y());
    Complex z = chart.inverse(w);
    mesh->vertices.emplace_back(z.real(), z.imag());
  }
  for (auto t : kept) mesh->triangles.push_back({renum[t[0]], renum[t[1]], renum[t[2]]});
  std::set<int> on_circle(disc.boundary.begin(), disc.boundary.end());
  for (std::size_t k = 1; k < disc.boundary.size(); ++k) {
    const int v = renum[disc.boundary[k]];
    const double th = disc.boundary_angle[k];
    mesh->vertices[v] = Eigen::Vector2d(1.0 / std::tan(0.5 * th), 0.0);  // exactly on the real line
    mesh->boundary.push_back(v);
    mesh->boundary_angle.push_back(th);
    nodes_.push_back(mesh->vertices[v].x());
  }
  for (int v : star)
    if (!on_circle.count(v)) mesh->flat_boundary.push_back(renum[v]);
  far_count_ = mesh->flat_boundary.size();
  mesh->h = h;
  mesh->rings = disc.rings;
  mesh->closed = false;
  mesh->validate();
  for (int v : mesh->flat_boundary) {
    const Complex z(mesh->vertices[v].x(), mesh->vertices[v].y());
    if (!is_identity(sigma(z))) {
      std::ostringstream os;
      os << "HalfplaneDtn: conductivity is not the identity at z = " << z << " on the truncation ring";
      throw InvalidInput(os.str());
    }
  }
  mesh_ = mesh;
  op_ = std::make_unique<dtn::FemOperator>(mesh_, sigma);
}

double HalfplaneDtn::energy(const std::function<double(double)>& phi, double phi_inf) const {
  Eigen::MatrixXd b(nodes_.size() + far_count_, 1);
  for (std::size_t i = 0; i < nodes_.size(); ++i) b(Eigen::Index(i), 0) = phi(nodes_[i]);
  for (std::size_t i = 0; i < far_count_; ++i) b(Eigen::Index(nodes_.size() + i), 0) = phi_inf;
  const Eigen::VectorXd u = op_->solve_dirichlet(b).col(0);
  return op_->energy(u);
}

double douglas_energy(const std::function<double(double)>& phi, double a, double b, int nodes) {
  if (!(b > a)) throw InvalidInput("douglas_energy: empty support interval");
  std::vector<double> gx, gw;
  gauss_nodes<20>(gx, gw);
  const int panels = std::max(1, nodes / 20);
  std::vector<double> x, w, f;
  const double len = (b - a) / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < gx.size(); ++i) {
      x.push_back(a + len * (p + 0.5 * (gx[i] + 1.0)));
      w.push_back(0.5 * len * gw[i]);
      f.push_back(phi(x.back()));
    }
  double inner = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      double q;
      if (i == j) {
        const double d = 1e-5 * len;
        const double s = (phi(x[i] + d) - phi(x[i] - d)) / (2.0 * d);
        q = s * s;
      } else {
        const double r = (f[i] - f[j]) / (x[i] - x[j]);
        q = r * r;
      }
      inner += w[i] * w[j] * q;
    }
    outer += w[i] * f[i] * f[i] * (1.0 / (x[i] - a) + 1.0 / (b - x[i]));
  }
  return (inner + 2.0 * outer) / (2.0 * kPi);
}

dtn::DtnMatrix halfplane_to_disc_dtn(const HalfplaneDtn& lambda, int cutoff) {
  const auto& x = lambda.nodes();
  if (4 * cutoff > int(x.size())) {
    std::ostringstream os;
    os << "halfplane_to_disc_dtn: " << x.size() << " boundary samples cannot resolve cutoff " << cutoff;
    throw InvalidInput(os.str());
  }
  const ConformalChart chart = ConformalChart::halfplane();
  std::vector<double> angles;
  for (double xi : x) angles.push_back(std::arg(chart.map(Complex(xi, 0.0))));
  angles.insert(angles.end(), lambda.far_count(), 0.0);  // the value at infinity, F(infinity) = 1
  return dtn::dtn_matrix_from_angles(lambda.fem(), angles, cutoff, lambda.sigma_spec());
}

// ---------------------------------------------------------------- exterior

double ExteriorSolution::evaluate(Complex z) const {
  if (std::abs(z) < 1.0 - 1e-12) throw InvalidInput("ExteriorSolution: point inside the unit disc");
  Complex w = 1.0 / z;
  // the mesh is an inscribed polygon; pull circle points onto it
  const double rmax = std::cos(kPi / double(disc.mesh->boundary.size()));
  if (std::abs(w) > rmax) w *= rmax / std::abs(w);
  return locator->interpolate(disc.values, Eigen::Vector2d(w.real(), w.imag()));
}

ConductivityModel exterior_to_disc_conductivity(const ConductivityModel& sigma) {
  ConductivityModel out;
  out.spec = "exterior(" + sigma.spec + ")";
  out.support_radius = 1.0;
  out.tensor = [t = sigma.tensor](Complex w) {
    if (std::abs(w) >= 1.0 || w == 0.0) return SymTensor::identity();  // sigma(infinity) = 1
    const Complex z = 1.0 / w;
    return pointwise::pushforward(t(z), -1.0 / (z * z), 0.0);
  };
  return out;
}

namespace {

void check_exterior(const ConductivityModel& sigma, double h) {
  if (!(sigma.support_radius * h <= 0.5)) {
    std::ostringstream os;
    os << "exterior: conductivity support radius " << sigma.support_radius << " reaches the puncture cells at h = " << h;
    throw InvalidInput(os.str());
  }
  for (int j = 0; j < 32; ++j) {
    const Complex z = std::polar(1.5 * sigma.support_radius + 1.0, 2.0 * kPi * j / 32);
    if (!is_identity(sigma.tensor(z))) throw InvalidInput("exterior: conductivity is not the identity near infinity");
  }
}

}  // namespace

ExteriorSolution exterior_to_disc_solve(const ConductivityModel& sigma, const BoundaryTrace& phi, double h) {
  check_exterior(sigma, h);
  const ConductivityModel inner = exterior_to_disc_conductivity(sigma);
  dtn::FemOperator op(dtn::make_disc_mesh(h), inner.tensor);
  // the chart reverses the circle: w = exp(-i theta)
  BoundaryTrace flipped(phi.cutoff());
  for (int n = -phi.cutoff(); n <= phi.cutoff(); ++n) flipped[n] = phi[-n];
  ExteriorSolution out{dtn::solve_dirichlet(op, flipped), nullptr};
  out.locator = std::make_shared<dtn::PointLocator>(op.mesh_ptr());
  return out;
}

dtn::DtnMatrix exterior_dtn(const ConductivityModel& sigma, double h, int cutoff) {
  check_exterior(sigma, h);
  const ConductivityModel inner = exterior_to_disc_conductivity(sigma);
  const dtn::DtnMatrix l = dtn::dtn_matrix(inner, h, cutoff);
  const Eigen::MatrixXcd& m = l.matrix();
  Eigen::MatrixXcd r(m.rows(), m.cols());
  const Eigen::Index d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) r(i, j) = m(d - 1 - i, d - 1 - j);
  return dtn::DtnMatrix(r, sigma.spec, h);
}

// ---------------------------------------------------------------- reflection

SymTensor ReflectedConductivity::operator()(Complex z) const {
  if (z.imag() >= 0.0) return half(z);
  const SymTensor s = half(eta(z));
  return {s.s11, -s.s12, s.s22};
}

TensorFunction ReflectedConductivity::tensor() const {
  return [self = *this](Complex z) { return self(z); };
}

ReflectedConductivity reflect_conductivity(const TensorFunction& sigma_upper) { return {sigma_upper}; }

// ---------------------------------------------------------------- partial data

PartialData partial_data(const TensorFunction& sigma_upper, double h, int cutoff) {
  auto mesh = std::make_shared<const dtn::TriangularMesh>(dtn::half_disc_mesh(h));
  const int arc = int(mesh->boundary.size());
  if (cutoff < 1 || 2 * cutoff > arc - 1) {
    std::ostringstream os;
    os << "partial_data: " << arc << " arc vertices are below the sampling rate for cutoff " << cutoff;
    throw InvalidInput(os.str());
  }
  dtn::FemOperator op(mesh, sigma_upper);
  const int nb = int(mesh->all_boundary().size());
  const int N = cutoff;
  const auto& th = mesh->boundary_angle;
  PartialData out;
  out.cutoff = N;
  out.h = h;

  // odd branch: Dirichlet sin(n theta) on the arc, zero on the flat side
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(nb, N);
  for (int k = 0; k < arc; ++k)
    for (int n = 1; n <= N; ++n) V(k, n - 1) = std::sin(n * th[k]);
  const Eigen::MatrixXd R = op.stiffness() * op.solve_dirichlet(V);
  out.lambda_gamma = Eigen::MatrixXd::Zero(N, N);
  for (int n = 1; n <= N; ++n)
    for (int m = 1; m <= N; ++m) {
      double s = 0.0;
      for (int k = 0; k < arc; ++k) s += R(mesh->boundary[k], n - 1) * std::sin(m * th[k]);
      out.lambda_gamma(m - 1, n - 1) = 2.0 / kPi * s;
    }

  // even branch: Neumann cos(n theta) on the arc, zero on the flat side
  const double dth = kPi / (arc - 1);
  out.sigma_gamma = Eigen::MatrixXd::Zero(N + 1, N);
  for (int n = 1; n <= N; ++n) {
    Eigen::VectorXd load = Eigen::VectorXd::Zero(Eigen::Index(mesh->vertex_count()));
    for (int k = 0; k < arc; ++k) {
      const double wk = (k == 0 || k == arc - 1) ? 0.5 : 1.0;
      load(mesh->boundary[k]) = std::cos(n * th[k]) * dth * wk;
    }
    const Eigen::VectorXd u = op.solve_neumann(load);
    for (int m = 0; m <= N; ++m) {
      double s = 0.0;
      for (int k = 0; k < arc; ++k) {
        const double wk = (k == 0 || k == arc - 1) ? 0.5 : 1.0;
        s += wk * u(mesh->boundary[k]) * std::cos(m * th[k]) * dth;
      }
      out.sigma_gamma(m, n - 1) = (m == 0 ? 1.0 : 2.0) / kPi * s;
    }
  }
  return out;
}

dtn::CauchyDataSet cauchy_data_from_partial(const PartialData& data) {
  const int N = data.cutoff;
  dtn::CauchyDataSet set;
  BoundaryTrace one(N);
  one[0] = 1.0;
  set.pairs.emplace_back(one, BoundaryTrace(N));
  const Complex half_i(0.0, 0.5);
  for (int n = 1; n <= N; ++n) {
    BoundaryTrace d(N), f(N);
    d[n] = -half_i;
    d[-n] = half_i;
    for (int m = 1; m <= N; ++m) {
      f[m] += -half_i * data.lambda_gamma(m - 1, n - 1);
      f[-m] += half_i * data.lambda_gamma(m - 1, n - 1);
    }
    set.pairs.emplace_back(d, f);
  }
  for (int n = 1; n <= N; ++n) {
    BoundaryTrace d(N), f(N);
    f[n] = 0.5;
    f[-n] = 0.5;
    d[0] = data.sigma_gamma(0, n - 1);
    for (int m = 1; m <= N; ++m) {
      d[m] += 0.5 * data.sigma_gamma(m, n - 1);
      d[-m] += 0.5 * data.sigma_gamma(m, n - 1);
    }
    set.pairs.emplace_back(d, f);
  }
  return set;
}

double cauchy_set_distance(const dtn::CauchyDataSet& set, const dtn::DtnMatrix& lambda, int modes) {
  auto low = [modes](const BoundaryTrace& t) {
    double s = 0.0;
    for (int n = -std::min(modes, t.cutoff()); n <= std::min(modes, t.cutoff()); ++n) s += std::norm(t[n]);
    return s;
  };
  auto total = [](const BoundaryTrace& t) { return t.coefficients().squaredNorm(); };
  double worst = 0.0;
  for (const auto& [d, f] : set.pairs) {
    if (d.cutoff() > lambda.cutoff()) throw InvalidInput("cauchy_set_distance: DtN cutoff below the data cutoff");
    const bool included = (total(d) > 0.0 && low(d) >= 0.5 * total(d)) || (total(f) > 0.0 && low(f) >= 0.5 * total(f));
    if (!included) continue;
    const BoundaryTrace ld = lambda.apply(d);
    const BoundaryTrace fr = f.resized(lambda.cutoff());
    BoundaryTrace diff(lambda.cutoff());
    for (int n = -lambda.cutoff(); n <= lambda.cutoff(); ++n) diff[n] = fr[n] - ld[n];
    const double scale = std::sqrt(std::max(low(fr), low(ld)));
    const double num = std::sqrt(low(diff));
    if (scale < 1e-12) {
      worst = std::max(worst, num);
      continue;
    }
    worst = std::max(worst, num / scale);
  }
  return worst;
}

// ---------------------------------------------------------------- extension

BeurlingAhlfors::BeurlingAhlfors(CircleHomeomorphism g, int quadrature) : g_(std::move(g)) {
  alpha_ = g_.evaluate(0.0);
  if (quadrature <= 16) gauss_nodes<16>(gl_x_, gl_w_);
  else if (quadrature <= 32) gauss_nodes<32>(gl_x_, gl_w_);
  else gauss_nodes<64>(gl_x_, gl_w_);
}

// Cayley chart C(z) = (z - i)/(z + i): real x sits at angle pi + 2 atan x.
double BeurlingAhlfors::h_real(double x) const {
  const double th = kPi + 2.0 * std::atan(x);
  const double g0 = g_.evaluate(th) - alpha_;
  return std::tan(0.5 * (g0 - kPi));
}

Complex BeurlingAhlfors::halfplane(Complex z) const {
  const double x = z.real(), y = z.imag();
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < gl_x_.size(); ++i) {
    const double t = 0.5 * (gl_x_[i] + 1.0), w = 0.5 * gl_w_[i];
    a += w * h_real(x + t * y);
    b += w * h_real(x - t * y);
  }
  return {0.5 * (a + b), a - b};
}

Complex BeurlingAhlfors::evaluate(Complex w) const {
  const double r = std::abs(w);
  if (r > 1.0) return 1.0 / std::conj(evaluate(1.0 / std::conj(w)));
  if (std::abs(1.0 - w) < 1e-12) return std::polar(1.0, alpha_);
  const Complex z = kI * (1.0 + w) / (1.0 - w);
  const Complex u = halfplane(Complex(z.real(), std::max(0.0, z.imag())));
  return std::polar(1.0, alpha_) * (u - kI) / (u + kI);
}

std::pair<Complex, Complex> BeurlingAhlfors::derivatives(Complex w) const {
  const double d = 1e-6;
  const Complex fx = (evaluate(w + d) - evaluate(w - d)) / (2.0 * d);
  const Complex fy = (evaluate(w + kI * d) - evaluate(w - kI * d)) / (2.0 * d);
  return {0.5 * (fx - kI * fy), 0.5 * (fx + kI * fy)};
}

DiffeoMap BeurlingAhlfors::sample(GridSpec grid) const {
  ComplexField v(grid), dz(grid), dzb(grid);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Complex w = grid.point(c);
    v[c] = evaluate(w);
    std::tie(dz[c], dzb[c]) = derivatives(w);
  }
  return DiffeoMap(std::move(v), std::move(dz), std::move(dzb));
}

double BeurlingAhlfors::boundary_error() const {
  double e = 0.0;
  for (int j = 0; j < g_.size(); ++j) {
    const Complex w = std::polar(1.0 - 1e-9, g_.theta(j));
    e = std::max(e, std::abs(evaluate(w) - std::polar(1.0, g_.lift(j))));
  }
  return e;
}

ExtensionReport extension_report(const BeurlingAhlfors& f, GridSpec grid, double qs_threshold) {
  ExtensionReport rep;
  rep.quasisymmetry = f.quasisymmetry_modulus();
  if (rep.quasisymmetry > qs_threshold) {
    rep.warned = true;
    std::ostringstream os;
    os << "quasisymmetry modulus " << rep.quasisymmetry << " exceeds " << qs_threshold << "; expect large distortion";
    rep.warning = os.str();
  }
  const DiffeoMap m = f.sample(grid);
  rep.min_jacobian = INFINITY;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const double J = jacobian_determinant(m.dz()[c], m.dzbar()[c]);
    rep.min_jacobian = std::min(rep.min_jacobian, J);
    const double K = std::pow(std::abs(m.dz()[c]) + std::abs(m.dzbar()[c]), 2) / J;
    rep.max_distortion = std::max(rep.max_distortion, K);
  }
  const auto& g = f.boundary_map();
  for (int j = 0; j < g.size(); ++j)
    rep.boundary_error =
        std::max(rep.boundary_error, std::abs(m.evaluate(std::polar(1.0, g.theta(j))) - std::polar(1.0, g.lift(j))));
  return rep;
}

std::function<Complex(Complex)> symmetric_extension(const CircleHomeomorphism& g, GridSpec check_grid) {
  std::vector<double> lift(g.size());
  for (int j = 0; j < g.size(); ++j) lift[j] = -g.lift(-j);
  auto f = std::make_shared<BeurlingAhlfors>(g);
  auto fe = std::make_shared<BeurlingAhlfors>(CircleHomeomorphism(std::move(lift)));
  std::function<Complex(Complex)> sym = [f, fe](Complex w) {
    return 0.5 * (f->evaluate(w) + std::conj(fe->evaluate(std::conj(w))));
  };
  const double d = 1e-6;
  for (std::size_t c = 0; c < check_grid.size(); ++c) {
    const Complex w = check_grid.point(c);
    if (std::abs(w) >= 1.0) continue;
    const Complex fx = (sym(w + d) - sym(w - d)) / (2.0 * d);
    const Complex fy = (sym(w + kI * d) - sym(w - kI * d)) / (2.0 * d);
    const double J = fx.real() * fy.imag() - fx.imag() * fy.real();
    if (!(J > 0.0)) {
      std::ostringstream os;
      os << "symmetric_extension: Jacobian " << J << " at w = " << w;
      throw NumericalFailure(os.str());
    }
  }
  return sym;
}

// ---------------------------------------------------------------- representative

Representative build_representative(const std::function<double(Complex)>& sigma_tilde,
                                    const std::vector<Complex>& boundary_samples) {
  const int M = int(boundary_samples.size());
  std::vector<double> lift(M);
  for (int j = 0; j < M; ++j) {
    double a = std::arg(boundary_samples[j]);
    if (j > 0) {
      while (a < lift[j - 1] - kPi) a += 2.0 * kPi;
      while (a > lift[j - 1] + kPi) a -= 2.0 * kPi;
    }
    lift[j] = a;
  }
  auto ib = std::make_shared<cgo::ImageBoundary>(cgo::image_boundary(boundary_samples, std::min(64, (M - 1) / 4)));
  auto ab = std::make_shared<const BeurlingAhlfors>(CircleHomeomorphism(std::move(lift)));
  Representative rep;
  rep.extension = ab;
  rep.rho = [ib](double a) { return ib->rho(a); };
  rep.phi = [ab, ib](Complex x) {
    const Complex w = ab->evaluate(x);
    const double r = std::abs(w);
    return r == 0.0 ? w : w * ib->rho(std::arg(w));
  };
  rep.tensor = [phi = rep.phi, sigma_tilde](Complex x) {
    const double d = 1e-6;
    const Complex fx = (phi(x + d) - phi(x - d)) / (2.0 * d);
    const Complex fy = (phi(x + kI * d) - phi(x - kI * d)) / (2.0 * d);
    const Complex a = 0.5 * (fx - kI * fy), b = 0.5 * (fx + kI * fy);
    const double J = std::norm(a) - std::norm(b);
    if (!(J > 0.0)) throw NumericalFailure("build_representative: extension is not orientation preserving");
    // derivatives of H = Phi^-1 at Phi(x)
    return pointwise::pushforward(SymTensor::isotropic(sigma_tilde(phi(x))), std::conj(a) / J, -b / J);
  };
  return rep;
}

}  // namespace calderon::domains
