#pragma once

#include <fftw3.h>

#include "calderon/grid.hpp"

namespace calderon {

// In-place m x m complex FFT. Plans are created under a global lock and
// executed through the new-array interface so one plan serves any buffer.
class Fft2 {
 public:
  explicit Fft2(int m);
  ~Fft2();
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  int size() const noexcept { return m_; }
  void forward(Complex* data) const;
  void backward(Complex* data) const;  // unnormalized

 private:
  int m_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// 1D in-place complex FFT of length m, same conventions.
class Fft1 {
 public:
  explicit Fft1(int m);
  ~Fft1();
  Fft1(const Fft1&) = delete;
  Fft1& operator=(const Fft1&) = delete;

  int size() const noexcept { return m_; }
  void forward(Complex* data) const;
  void backward(Complex* data) const;

 private:
  int m_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

}  // namespace calderon
