#pragma once

#include <memory>
#include <vector>

#include "calderon/grid.hpp"

namespace calderon {

class Fft2;

// Periodic: the box itself is the torus, S has multiplier conj(xi)/xi and C
// has -2i/xi, zero frequency mapped to 0.
// FreeSpace: the box is zero padded to a torus three times wider and the
// kernels are truncated at radius R = 3L, so S and C agree with the
// whole-plane operators for densities supported in the box.
enum class TorusMode { Periodic, FreeSpace };

class SpectralTransform {
 public:
  explicit SpectralTransform(GridSpec grid, TorusMode mode = TorusMode::FreeSpace);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const GridSpec& grid() const noexcept { return grid_; }
  TorusMode mode() const noexcept { return mode_; }
  int torus_size() const noexcept { return m_; }
  double torus_period() const noexcept { return m_ * grid_.cell(); }
  // Frequency index k in FFT order -> angular frequency.
  double frequency(int k) const noexcept;
  Complex beurling_multiplier(int kx, int ky) const noexcept { return s_mult_[std::size_t(ky) * m_ + kx]; }
  Complex cauchy_multiplier(int kx, int ky) const noexcept { return c_mult_[std::size_t(ky) * m_ + kx]; }

  ComplexField beurling(const ComplexField& h) const;
  ComplexField cauchy(const ComplexField& h) const;
  // Both transforms from one forward FFT. Either output may be null.
  void cauchy_beurling(const ComplexField& h, ComplexField* ch, ComplexField* sh) const;
  // Spectral d/dz and d/dzbar on the torus.
  ComplexField d_z(const ComplexField& f) const;
  ComplexField d_zbar(const ComplexField& f) const;

 private:
  void forward(const ComplexField& h, std::vector<Complex>& buf) const;
  void backward_into(std::vector<Complex>& buf, ComplexField& out) const;

  GridSpec grid_;
  TorusMode mode_;
  int m_;
  std::vector<Complex> s_mult_, c_mult_;
  std::unique_ptr<Fft2> fft_;
};

// Indicator of the disc |z| < radius projected onto the frequencies of the
// padded torus (exact Fourier transform, square cutoff), sampled at cell
// centres. Converges to the indicator away from the circle.
RealField band_limited_disc(GridSpec grid, double radius, int pad = 3);

}  // namespace calderon
