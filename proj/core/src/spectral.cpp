#include "calderon/spectral.hpp"

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>

#include "fft.hpp"

namespace calderon {

namespace {

int fft_index(int k, int m) { return k < (m + 1) / 2 ? k : k - m; }

}  // namespace

SpectralTransform::SpectralTransform(GridSpec grid, TorusMode mode)
    : grid_(grid), mode_(mode), m_(mode == TorusMode::FreeSpace ? 3 * grid.n : grid.n) {
  grid_.validate();
  fft_ = std::make_unique<Fft2>(m_);
  const std::size_t total = std::size_t(m_) * m_;
  s_mult_.assign(total, 0.0);
  c_mult_.assign(total, 0.0);
  const double radius = 3.0 * grid_.half_width;
  for (int ky = 0; ky < m_; ++ky)
    for (int kx = 0; kx < m_; ++kx) {
      if (kx == 0 && ky == 0) continue;
      const Complex xi(frequency(kx), frequency(ky));
      double damp = 1.0;
      if (mode_ == TorusMode::FreeSpace) damp = 1.0 - boost::math::cyl_bessel_j(0, radius * std::abs(xi));
      const std::size_t idx = std::size_t(ky) * m_ + kx;
      s_mult_[idx] = std::conj(xi) / xi * damp;
      c_mult_[idx] = Complex(0.0, -2.0) / xi * damp;
    }
}

SpectralTransform::~SpectralTransform() = default;

double SpectralTransform::frequency(int k) const noexcept { return 2.0 * kPi * fft_index(k, m_) / torus_period(); }

void SpectralTransform::forward(const ComplexField& h, std::vector<Complex>& buf) const {
  if (!(h.grid() == grid_)) throw InvalidInput("spectral transform: grid mismatch");
  buf.assign(std::size_t(m_) * m_, 0.0);
  const int n = grid_.n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) buf[std::size_t(j) * m_ + i] = h(i, j);
  fft_->forward(buf.data());
}

void SpectralTransform::backward_into(std::vector<Complex>& buf, ComplexField& out) const {
  fft_->backward(buf.data());
  const double scale = 1.0 / (double(m_) * m_);
  const int n = grid_.n;
  if (!(out.grid() == grid_)) out = ComplexField(grid_);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = buf[std::size_t(j) * m_ + i] * scale;
}

void SpectralTransform::cauchy_beurling(const ComplexField& h, ComplexField* ch, ComplexField* sh) const {
  std::vector<Complex> hat;
  forward(h, hat);
  const std::size_t total = hat.size();
  if (ch) {
    std::vector<Complex> buf(total);
    for (std::size_t k = 0; k < total; ++k) buf[k] = hat[k] * c_mult_[k];
    backward_into(buf, *ch);
  }
  if (sh) {
    for (std::size_t k = 0; k < total; ++k) hat[k] *= s_mult_[k];
    backward_into(hat, *sh);
  }
}

ComplexField SpectralTransform::beurling(const ComplexField& h) const {
  ComplexField out(grid_);
  cauchy_beurling(h, nullptr, &out);
  return out;
}

ComplexField SpectralTransform::cauchy(const ComplexField& h) const {
  ComplexField out(grid_);
  cauchy_beurling(h, &out, nullptr);
  return out;
}

ComplexField SpectralTransform::d_z(const ComplexField& f) const {
  std::vector<Complex> buf;
  forward(f, buf);
  for (int ky = 0; ky < m_; ++ky)
    for (int kx = 0; kx < m_; ++kx) {
      const Complex xi(frequency(kx), frequency(ky));
      buf[std::size_t(ky) * m_ + kx] *= Complex(0.0, 0.5) * std::conj(xi);
    }
  ComplexField out(grid_);
  backward_into(buf, out);
  return out;
}

ComplexField SpectralTransform::d_zbar(const ComplexField& f) const {
  std::vector<Complex> buf;
  forward(f, buf);
  for (int ky = 0; ky < m_; ++ky)
    for (int kx = 0; kx < m_; ++kx) {
      const Complex xi(frequency(kx), frequency(ky));
      buf[std::size_t(ky) * m_ + kx] *= Complex(0.0, 0.5) * xi;
    }
  ComplexField out(grid_);
  backward_into(buf, out);
  return out;
}

RealField band_limited_disc(GridSpec grid, double radius, int pad) {
  grid.validate();
  if (pad < 1) throw InvalidInput("pad factor must be at least 1");
  const int m = pad * grid.n;
  const double h = grid.cell();
  const double period = m * h;
  const double x0 = -grid.half_width + 0.5 * h;
  std::vector<Complex> buf(std::size_t(m) * m);
  for (int ky = 0; ky < m; ++ky) {
    const double ey = 2.0 * kPi * fft_index(ky, m) / period;
    for (int kx = 0; kx < m; ++kx) {
      const double ex = 2.0 * kPi * fft_index(kx, m) / period;
      const double rho = std::hypot(ex, ey);
      const double ft = rho == 0.0 ? kPi * radius * radius
                                   : 2.0 * kPi * radius * boost::math::cyl_bessel_j(1, radius * rho) / rho;
      buf[std::size_t(ky) * m + kx] = ft * std::polar(1.0, (ex + ey) * x0);
    }
  }
  Fft2 fft(m);
  fft.backward(buf.data());
  RealField out(grid);
  const double scale = 1.0 / (period * period);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) out(i, j) = buf[std::size_t(j) * m + i].real() * scale;
  return out;
}

}  // namespace calderon
