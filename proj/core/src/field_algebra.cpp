#include "calderon/field_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace calderon {

namespace {

std::string describe_cell(const GridSpec& g, std::size_t k) {
  std::ostringstream os;
  const Complex z = g.point(k);
  os << "cell " << k << " (i=" << k % g.n << ", j=" << k / g.n << ", x=" << z.real() << ", y=" << z.imag() << ")";
  return os.str();
}

void check_cell(const GridSpec& g, std::size_t k, const SymTensor& s) {
  auto [lo, hi] = s.eigenvalues();
  if (!(lo >= kMinEigenvalue && hi <= kMaxEigenvalue) || !std::isfinite(lo) || !std::isfinite(hi)) {
    std::ostringstream os;
    os << "conductivity not admissible at " << describe_cell(g, k) << ": eigenvalues " << lo << ", " << hi;
    throw InvalidInput(os.str());
  }
}

}  // namespace

ConductivityTensor::ConductivityTensor(GridSpec grid, std::vector<double> s11, std::vector<double> s12,
                                       std::vector<double> s22, std::vector<std::uint8_t> mask)
    : grid_(grid), s11_(std::move(s11)), s12_(std::move(s12)), s22_(std::move(s22)), mask_(std::move(mask)) {
  grid_.validate();
  const std::size_t n = grid_.size();
  if (s11_.size() != n || s12_.size() != n || s22_.size() != n || mask_.size() != n)
    throw InvalidInput("conductivity component sizes do not match grid");
  for (std::size_t k = 0; k < n; ++k) {
    check_cell(grid_, k, at(k));
    if (!mask_[k] && !(s11_[k] == 1.0 && s12_[k] == 0.0 && s22_[k] == 1.0))
      throw InvalidInput("conductivity differs from identity outside the domain mask at " + describe_cell(grid_, k));
  }
}

ConductivityTensor ConductivityTensor::identity(GridSpec grid) {
  const std::size_t n = grid.size();
  return ConductivityTensor(grid, std::vector<double>(n, 1.0), std::vector<double>(n, 0.0),
                            std::vector<double>(n, 1.0), std::vector<std::uint8_t>(n, 0));
}

ConductivityTensor ConductivityTensor::sample(const ConductivityModel& model, GridSpec grid, int subsamples) {
  grid.validate();
  if (subsamples < 1) throw InvalidInput("subsamples must be positive");
  const std::size_t n = grid.size();
  std::vector<double> a(n), b(n), c(n);
  std::vector<std::uint8_t> mask(n, 0);
  const double h = grid.cell();
  const double r2 = model.support_radius * model.support_radius;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex z0 = grid.point(k);
    // far cells are identity by contract
    if (std::abs(z0) - h > model.support_radius) {
      a[k] = 1.0;
      b[k] = 0.0;
      c[k] = 1.0;
      continue;
    }
    SymTensor acc{0.0, 0.0, 0.0};
    bool touches = false;
    for (int q = 0; q < subsamples; ++q)
      for (int p = 0; p < subsamples; ++p) {
        const Complex z = z0 + Complex((p + 0.5) / subsamples - 0.5, (q + 0.5) / subsamples - 0.5) * h;
        if (std::norm(z) < r2) touches = true;
        acc = acc + model(z);
      }
    if (!touches) {
      a[k] = 1.0;
      b[k] = 0.0;
      c[k] = 1.0;
      continue;
    }
    const double w = 1.0 / (subsamples * subsamples);
    a[k] = acc.s11 * w;
    b[k] = acc.s12 * w;
    c[k] = acc.s22 * w;
    mask[k] = 1;
  }
  return ConductivityTensor(grid, std::move(a), std::move(b), std::move(c), std::move(mask));
}

SymTensor ConductivityTensor::nearest(Complex z) const {
  const double h = grid_.cell();
  const int i = std::clamp(int(std::floor((z.real() + grid_.half_width) / h)), 0, grid_.n - 1);
  const int j = std::clamp(int(std::floor((z.imag() + grid_.half_width) / h)), 0, grid_.n - 1);
  return at(grid_.index(i, j));
}

SymTensor ConductivityTensor::interpolate(Complex z) const {
  const double h = grid_.cell();
  const double u = std::clamp((z.real() + grid_.half_width) / h - 0.5, 0.0, grid_.n - 1.0);
  const double v = std::clamp((z.imag() + grid_.half_width) / h - 0.5, 0.0, grid_.n - 1.0);
  const int i0 = std::min(int(u), grid_.n - 2), j0 = std::min(int(v), grid_.n - 2);
  const double s = u - i0, t = v - j0;
  // convex weights keep the result positive definite
  return at(grid_.index(i0, j0)) * ((1 - s) * (1 - t)) + at(grid_.index(i0 + 1, j0)) * (s * (1 - t)) +
         at(grid_.index(i0, j0 + 1)) * ((1 - s) * t) + at(grid_.index(i0 + 1, j0 + 1)) * (s * t);
}

double ellipticity_constant(const ConductivityTensor& sigma) {
  double c0 = 1.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    auto [lo, hi] = sigma.at(k).eigenvalues();
    if (!(lo > 0.0)) {
      std::ostringstream os;
      os << "non positive definite conductivity at " << describe_cell(sigma.grid(), k) << ": eigenvalues " << lo
         << ", " << hi;
      throw InvalidInput(os.str());
    }
    c0 = std::max({c0, hi, 1.0 / lo});
  }
  return c0;
}

ComplexField mu1_from_sigma(const ConductivityTensor& sigma) {
  ComplexField out(sigma.grid());
  for (std::size_t k = 0; k < sigma.size(); ++k) out[k] = pointwise::mu1(sigma.at(k));
  return out;
}

RealField mu2_from_sigma(const ConductivityTensor& sigma) {
  RealField out(sigma.grid());
  for (std::size_t k = 0; k < sigma.size(); ++k) out[k] = pointwise::mu2(sigma.at(k));
  return out;
}

std::pair<ComplexField, RealField> nu_from_mu(const ComplexField& mu1, const RealField& mu2) {
  if (!(mu1.grid() == mu2.grid())) throw InvalidInput("nu_from_mu: grid mismatch");
  ComplexField nu1(mu1.grid());
  RealField nu2(mu1.grid());
  for (std::size_t k = 0; k < mu1.size(); ++k) {
    if (!(std::abs(mu1[k]) < 1.0 && std::abs(mu2[k]) < 1.0))
      throw InvalidInput("nu_from_mu: |mu| >= 1 at " + describe_cell(mu1.grid(), k));
    const NuPair nu = pointwise::nu_from_mu(mu1[k], mu2[k]);
    nu1[k] = nu.nu1;
    nu2[k] = nu.nu2;
  }
  return {std::move(nu1), std::move(nu2)};
}

std::pair<ComplexField, RealField> mu_from_nu(const ComplexField& nu1, const RealField& nu2) {
  if (!(nu1.grid() == nu2.grid())) throw InvalidInput("mu_from_nu: grid mismatch");
  ComplexField mu1(nu1.grid());
  RealField mu2(nu1.grid());
  for (std::size_t k = 0; k < nu1.size(); ++k) {
    const MuPair m = pointwise::mu_from_nu(nu1[k], nu2[k]);
    const NuPair back = pointwise::nu_from_mu(m.mu1, m.mu2);
    if (std::abs(back.nu1 - nu1[k]) > 1e-10 || std::abs(back.nu2 - nu2[k]) > 1e-10)
      throw NumericalFailure("mu_from_nu: round trip failed at " + describe_cell(nu1.grid(), k));
    mu1[k] = m.mu1;
    mu2[k] = m.mu2;
  }
  return {std::move(mu1), std::move(mu2)};
}

std::pair<ComplexField, RealField> sigma_to_nu(const ConductivityTensor& sigma) {
  ComplexField nu1(sigma.grid());
  RealField nu2(sigma.grid());
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    const NuPair nu = pointwise::sigma_to_nu(sigma.at(k));
    nu1[k] = nu.nu1;
    nu2[k] = nu.nu2;
  }
  return {std::move(nu1), std::move(nu2)};
}

ConductivityTensor nu_to_sigma(const ComplexField& nu1, const RealField& nu2) {
  if (!(nu1.grid() == nu2.grid())) throw InvalidInput("nu_to_sigma: grid mismatch");
  const std::size_t n = nu1.size();
  std::vector<double> a(n), b(n), c(n);
  std::vector<std::uint8_t> mask(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::abs(nu1[k]) + std::abs(nu2[k]) < 1.0))
      throw InvalidInput("nu_to_sigma: |nu1| + |nu2| >= 1 at " + describe_cell(nu1.grid(), k));
    if (nu1[k] == 0.0 && nu2[k] == 0.0) {
      a[k] = 1.0;
      b[k] = 0.0;
      c[k] = 1.0;
      mask[k] = 0;
      continue;
    }
    const SymTensor s = pointwise::nu_to_sigma(nu1[k], nu2[k]);
    a[k] = s.s11;
    b[k] = s.s12;
    c[k] = s.s22;
    mask[k] = 1;
  }
  return ConductivityTensor(nu1.grid(), std::move(a), std::move(b), std::move(c), std::move(mask));
}

ConductivityTensor hat_sigma(const ConductivityTensor& sigma) {
  const std::size_t n = sigma.size();
  std::vector<double> a(n), b(n), c(n);
  std::vector<std::uint8_t> mask(sigma.mask().begin(), sigma.mask().end());
  for (std::size_t k = 0; k < n; ++k) {
    const SymTensor s = sigma.at(k);
    if (!(s.det() > 0.0)) throw InvalidInput("hat_sigma: det <= 0 at " + describe_cell(sigma.grid(), k));
    const SymTensor t = pointwise::hat(s);
    a[k] = t.s11;
    b[k] = t.s12;
    c[k] = t.s22;
  }
  return ConductivityTensor(sigma.grid(), std::move(a), std::move(b), std::move(c), std::move(mask));
}

BeltramiData beltrami_data(const ConductivityTensor& sigma) {
  BeltramiData d;
  d.mu1 = mu1_from_sigma(sigma);
  d.mu2 = mu2_from_sigma(sigma);
  std::tie(d.nu1, d.nu2) = sigma_to_nu(sigma);
  d.kappa = sup_norm(d.mu1);
  return d;
}

// ---------------------------------------------------------------- maps

AnalyticMap identity_map() {
  return {"identity", [](Complex z) { return z; }, [](Complex) { return Complex(1.0); },
          [](Complex) { return Complex(0.0); }, [](Complex z) { return z; }};
}

AnalyticMap rotation_map(double alpha) {
  const Complex e = std::polar(1.0, alpha);
  return {"rotation", [e](Complex z) { return e * z; }, [e](Complex) { return e; },
          [](Complex) { return Complex(0.0); }, [e](Complex z) { return z / e; }};
}

AnalyticMap scaling_map(double factor) {
  if (!(factor > 0.0)) throw InvalidInput("scaling factor must be positive");
  return {"scaling", [factor](Complex z) { return factor * z; }, [factor](Complex) { return Complex(factor); },
          [](Complex) { return Complex(0.0); }, [factor](Complex z) { return z / factor; }};
}

AnalyticMap linear_beltrami_map(Complex c) {
  if (!(std::abs(c) < 1.0)) throw InvalidInput("linear Beltrami map needs |c| < 1");
  // w = z + c zbar  =>  z = (w - c wbar) / (1 - |c|^2)
  return {"linear", [c](Complex z) { return z + c * std::conj(z); }, [](Complex) { return Complex(1.0); },
          [c](Complex) { return c; }, [c](Complex w) { return (w - c * std::conj(w)) / (1.0 - std::norm(c)); }};
}

AnalyticMap radial_shear_map(double beta) {
  AnalyticMap m;
  m.name = "radial-shear";
  m.map = [beta](Complex z) {
    const double r = std::abs(z);
    return r < 1.0 ? z * std::polar(1.0, beta * (1.0 - r)) : z;
  };
  m.dz = [beta](Complex z) {
    const double r = std::abs(z);
    if (r >= 1.0) return Complex(1.0);
    return std::polar(1.0, beta * (1.0 - r)) * Complex(1.0, -0.5 * beta * r);
  };
  m.dzbar = [beta](Complex z) {
    const double r = std::abs(z);
    if (r >= 1.0 || r == 0.0) return Complex(0.0);
    return std::polar(1.0, beta * (1.0 - r)) * Complex(0.0, -0.5 * beta) * z * z / r;
  };
  m.inverse = [beta](Complex y) {
    const double r = std::abs(y);
    return r < 1.0 ? y * std::polar(1.0, -beta * (1.0 - r)) : y;
  };
  return m;
}

AnalyticMap compose(const AnalyticMap& outer, const AnalyticMap& inner) {
  AnalyticMap m;
  m.name = outer.name + "*" + inner.name;
  m.map = [outer, inner](Complex z) { return outer.map(inner.map(z)); };
  // chain rule in complex form
  m.dz = [outer, inner](Complex z) {
    const Complex w = inner.map(z);
    return outer.dz(w) * inner.dz(z) + outer.dzbar(w) * std::conj(inner.dzbar(z));
  };
  m.dzbar = [outer, inner](Complex z) {
    const Complex w = inner.map(z);
    return outer.dz(w) * inner.dzbar(z) + outer.dzbar(w) * std::conj(inner.dz(z));
  };
  m.inverse = [outer, inner](Complex y) { return inner.inverse(outer.inverse(y)); };
  return m;
}

// ---------------------------------------------------------------- DiffeoMap

DiffeoMap::DiffeoMap(ComplexField values, ComplexField dz, ComplexField dzbar)
    : values_(std::move(values)), dz_(std::move(dz)), dzbar_(std::move(dzbar)) {
  if (!(values_.grid() == dz_.grid() && values_.grid() == dzbar_.grid()))
    throw InvalidInput("DiffeoMap: grid mismatch");
  offset_ = ComplexField(values_.grid());
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double J = jacobian_determinant(dz_[k], dzbar_[k]);
    if (!(J > 0.0)) {
      std::ostringstream os;
      os << "DiffeoMap: Jacobian " << J << " <= 0 at " << describe_cell(values_.grid(), k);
      throw InvalidInput(os.str());
    }
    offset_[k] = values_[k] - values_.grid().point(k);
  }
}

DiffeoMap DiffeoMap::sample(const AnalyticMap& f, GridSpec grid) {
  return DiffeoMap(ComplexField::sample(grid, f.map), ComplexField::sample(grid, f.dz),
                   ComplexField::sample(grid, f.dzbar));
}

DiffeoMap DiffeoMap::identity(GridSpec grid) { return sample(identity_map(), grid); }

RealField DiffeoMap::jacobian() const {
  RealField J(grid());
  for (std::size_t k = 0; k < J.size(); ++k) J[k] = jacobian_determinant(dz_[k], dzbar_[k]);
  return J;
}

Complex DiffeoMap::evaluate(Complex x) const { return x + offset_.interpolate(x); }

std::pair<Complex, Complex> DiffeoMap::derivatives(Complex x) const {
  return {dz_.interpolate(x), dzbar_.interpolate(x)};
}

Complex DiffeoMap::nearest_preimage(Complex y) const {
  std::size_t best = 0;
  double bd = std::abs(values_[0] - y);
  for (std::size_t k = 1; k < values_.size(); ++k) {
    const double d = std::abs(values_[k] - y);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  return grid().point(best);
}

Complex DiffeoMap::inverse(Complex y, double tol) const {
  const GridSpec& g = grid();
  auto newton = [&](Complex x, Complex& out) {
    for (int it = 0; it < 60; ++it) {
      if (!g.contains(x)) return false;
      const Complex r = y - evaluate(x);
      if (std::abs(r) <= tol * std::max(1.0, std::abs(y))) {
        out = x;
        return true;
      }
      const Complex a = dz_.interpolate(x), b = dzbar_.interpolate(x);
      const double J = std::norm(a) - std::norm(b);
      if (!(J > 0.0)) return false;
      Complex dx = (std::conj(a) * r - b * std::conj(r)) / J;
      // keep steps inside the box
      double step = 1.0;
      while (!g.contains(x + step * dx) && step > 1e-3) step *= 0.5;
      x += step * dx;
    }
    return false;
  };
  Complex out;
  if (g.contains(y) && newton(y, out)) return out;
  if (newton(nearest_preimage(y), out)) return out;
  std::ostringstream os;
  os << "invert_map: no preimage of (" << y.real() << ", " << y.imag() << ") inside the grid box";
  throw InvalidInput(os.str());
}

double distortion(Complex dz, Complex dzbar) {
  const double a = std::abs(dz), b = std::abs(dzbar);
  const double J = a * a - b * b;
  if (!(J > 0.0)) throw InvalidInput("distortion: Jacobian <= 0");
  return (a + b) * (a + b) / J;
}

RealField distortion(const DiffeoMap& f) {
  RealField K(f.grid());
  for (std::size_t k = 0; k < K.size(); ++k) K[k] = distortion(f.dz()[k], f.dzbar()[k]);
  return K;
}

ConductivityTensor pushforward_pointwise(const ConductivityTensor& sigma, const DiffeoMap& f) {
  if (!(sigma.grid() == f.grid())) throw InvalidInput("pushforward: grid mismatch");
  const std::size_t n = sigma.size();
  std::vector<double> a(n), b(n), c(n);
  std::vector<std::uint8_t> mask(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SymTensor t = pointwise::pushforward(sigma.at(k), f.dz()[k], f.dzbar()[k]);
    const bool ident = t.s11 == 1.0 && t.s12 == 0.0 && t.s22 == 1.0;
    mask[k] = sigma.in_domain(k) || !ident;
    a[k] = t.s11;
    b[k] = t.s12;
    c[k] = t.s22;
  }
  return ConductivityTensor(sigma.grid(), std::move(a), std::move(b), std::move(c), std::move(mask));
}

ConductivityTensor pushforward(const ConductivityTensor& sigma, const DiffeoMap& f, GridSpec target) {
  if (!(sigma.grid() == f.grid())) throw InvalidInput("pushforward: grid mismatch");
  target.validate();
  const std::size_t n = target.size();
  std::vector<double> a(n), b(n), c(n);
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex y = target.point(k);
    const Complex x = f.inverse(y);
    const SymTensor s = sigma.nearest(x);
    auto [dz, dzbar] = f.derivatives(x);
    const SymTensor t = pointwise::pushforward(s, dz, dzbar);
    const bool ident = std::abs(t.s11 - 1.0) < 1e-14 && std::abs(t.s12) < 1e-14 && std::abs(t.s22 - 1.0) < 1e-14;
    if (ident) {
      a[k] = 1.0;
      b[k] = 0.0;
      c[k] = 1.0;
    } else {
      a[k] = t.s11;
      b[k] = t.s12;
      c[k] = t.s22;
      mask[k] = 1;
    }
  }
  return ConductivityTensor(target, std::move(a), std::move(b), std::move(c), std::move(mask));
}

ConductivityModel pushforward(const ConductivityModel& sigma, const AnalyticMap& f) {
  ConductivityModel m;
  m.spec = sigma.spec + " pushed by " + f.name;
  m.support_radius = std::max(sigma.support_radius, std::abs(f.map(Complex(sigma.support_radius, 0.0))));
  m.tensor = [sigma, f](Complex y) {
    const Complex x = f.inverse(y);
    return pointwise::pushforward(sigma(x), f.dz(x), f.dzbar(x));
  };
  return m;
}

}  // namespace calderon
