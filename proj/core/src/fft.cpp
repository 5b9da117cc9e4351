#include "fft.hpp"

#include <mutex>
#include <vector>

namespace calderon {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Fft2::Fft2(int m) : m_(m) {
  std::vector<Complex> scratch(std::size_t(m) * m);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_dft_2d(m, m, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, flags);
  bwd_ = fftw_plan_dft_2d(m, m, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (!fwd_ || !bwd_) throw NumericalFailure("FFTW planning failed");
}

Fft2::~Fft2() {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

void Fft2::forward(Complex* data) const { fftw_execute_dft(fwd_, as_fftw(data), as_fftw(data)); }
void Fft2::backward(Complex* data) const { fftw_execute_dft(bwd_, as_fftw(data), as_fftw(data)); }

Fft1::Fft1(int m) : m_(m) {
  std::vector<Complex> scratch(m);
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fwd_ = fftw_plan_dft_1d(m, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_FORWARD, flags);
  bwd_ = fftw_plan_dft_1d(m, as_fftw(scratch.data()), as_fftw(scratch.data()), FFTW_BACKWARD, flags);
  if (!fwd_ || !bwd_) throw NumericalFailure("FFTW planning failed");
}

Fft1::~Fft1() {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

void Fft1::forward(Complex* data) const { fftw_execute_dft(fwd_, as_fftw(data), as_fftw(data)); }
void Fft1::backward(Complex* data) const { fftw_execute_dft(bwd_, as_fftw(data), as_fftw(data)); }

}  // namespace calderon
