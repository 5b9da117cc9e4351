#include "calderon/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace calderon {

BoundaryTrace::BoundaryTrace(int cutoff) : cutoff_(cutoff), c_(Eigen::VectorXcd::Zero(2 * cutoff + 1)) {
  if (cutoff < 0) throw InvalidInput("trace cutoff must be nonnegative");
}

BoundaryTrace::BoundaryTrace(Eigen::VectorXcd coeffs) : cutoff_(int(coeffs.size() - 1) / 2), c_(std::move(coeffs)) {
  if (c_.size() % 2 == 0) throw InvalidInput("trace coefficient vector must have odd length");
}

BoundaryTrace BoundaryTrace::mode(int n, int cutoff) {
  if (std::abs(n) > cutoff) throw InvalidInput("mode index exceeds cutoff");
  BoundaryTrace t(cutoff);
  t[n] = 1.0;
  return t;
}

BoundaryTrace BoundaryTrace::from_samples(std::span<const Complex> samples, int cutoff) {
  const int m = int(samples.size());
  if (m <= 2 * cutoff) throw InvalidInput("too few boundary samples for the requested cutoff");
  std::vector<Complex> buf(samples.begin(), samples.end());
  Fft1 fft(m);
  fft.forward(buf.data());
  BoundaryTrace t(cutoff);
  for (int n = -cutoff; n <= cutoff; ++n) t[n] = buf[std::size_t((n % m + m) % m)] / double(m);
  return t;
}

BoundaryTrace BoundaryTrace::from_function(const std::function<Complex(double)>& f, int cutoff, int samples) {
  if (samples <= 0) samples = std::max(64, 8 * cutoff + 8);
  std::vector<Complex> v(samples);
  for (int j = 0; j < samples; ++j) v[j] = f(2.0 * kPi * j / samples);
  return from_samples(v, cutoff);
}

Complex BoundaryTrace::evaluate(double theta) const {
  Complex s = 0.0;
  for (int n = -cutoff_; n <= cutoff_; ++n) s += (*this)[n] * std::polar(1.0, n * theta);
  return s;
}

std::vector<Complex> BoundaryTrace::samples(int count) const {
  if (count <= 2 * cutoff_) throw InvalidInput("too few samples for trace synthesis");
  std::vector<Complex> buf(count, 0.0);
  for (int n = -cutoff_; n <= cutoff_; ++n) buf[std::size_t((n % count + count) % count)] += (*this)[n];
  Fft1 fft(count);
  fft.backward(buf.data());
  return buf;
}

BoundaryTrace BoundaryTrace::derivative() const {
  BoundaryTrace d(cutoff_);
  for (int n = -cutoff_; n <= cutoff_; ++n) d[n] = Complex(0.0, n) * (*this)[n];
  return d;
}

BoundaryTrace BoundaryTrace::resized(int cutoff) const {
  BoundaryTrace t(cutoff);
  for (int n = -std::min(cutoff, cutoff_); n <= std::min(cutoff, cutoff_); ++n) t[n] = (*this)[n];
  return t;
}

bool BoundaryTrace::is_real(double tol) const {
  for (int n = 0; n <= cutoff_; ++n)
    if (std::abs((*this)[n] - std::conj((*this)[-n])) > tol) return false;
  return true;
}

double BoundaryTrace::h_half_norm_squared() const {
  double s = 0.0;
  for (int n = -cutoff_; n <= cutoff_; ++n) s += (1.0 + std::abs(n)) * std::norm((*this)[n]);
  return s;
}

// ------------------------------------------------------------------------

CircleHomeomorphism::CircleHomeomorphism(std::vector<double> lift) : lift_(std::move(lift)) {
  const int m = size();
  if (m < 8) throw InvalidInput("circle homeomorphism needs at least 8 samples");
  for (int j = 0; j < m; ++j) {
    const double next = j + 1 < m ? lift_[j + 1] : lift_[0] + 2.0 * kPi;
    if (!(next > lift_[j]) || !std::isfinite(next))
      throw InvalidInput("circle map samples are not strictly increasing at index " + std::to_string(j));
  }
}

CircleHomeomorphism CircleHomeomorphism::from_function(const std::function<double(double)>& lift, int samples) {
  std::vector<double> v(samples);
  for (int j = 0; j < samples; ++j) v[j] = lift(2.0 * kPi * j / samples);
  return CircleHomeomorphism(std::move(v));
}

CircleHomeomorphism CircleHomeomorphism::identity(int samples) {
  return from_function([](double t) { return t; }, samples);
}

CircleHomeomorphism CircleHomeomorphism::rotation(double alpha, int samples) {
  return from_function([alpha](double t) { return t + alpha; }, samples);
}

double CircleHomeomorphism::lift(int j) const {
  const int m = size();
  const int q = (j >= 0 ? j / m : -((-j + m - 1) / m));
  return lift_[std::size_t(j - q * m)] + 2.0 * kPi * q;
}

double CircleHomeomorphism::derivative_at(int j) const {
  const double d = 2.0 * kPi / size();
  return (-lift(j + 2) + 8.0 * lift(j + 1) - 8.0 * lift(j - 1) + lift(j - 2)) / (12.0 * d);
}

double CircleHomeomorphism::evaluate(double theta) const {
  const int m = size();
  const double d = 2.0 * kPi / m;
  const double u = theta / d;
  const int j = int(std::floor(u));
  const double t = u - j;
  // cubic Hermite with derivative estimates at both ends
  const double p0 = lift(j), p1 = lift(j + 1);
  const double m0 = derivative_at(j) * d, m1 = derivative_at(j + 1) * d;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1;
}

double CircleHomeomorphism::derivative(double theta) const {
  const int m = size();
  const double d = 2.0 * kPi / m;
  const double u = theta / d;
  const int j = int(std::floor(u));
  const double t = u - j;
  const double p0 = lift(j), p1 = lift(j + 1);
  const double m0 = derivative_at(j) * d, m1 = derivative_at(j + 1) * d;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * p1 + (3 * t2 - 2 * t) * m1) / d;
}

CircleHomeomorphism CircleHomeomorphism::inverse(int samples) const {
  if (samples <= 0) samples = size();
  const int m = size();
  const double d = 2.0 * kPi / m;
  std::vector<double> out(samples);
  for (int k = 0; k < samples; ++k) {
    const double target = 2.0 * kPi * k / samples;
    // bracket by sample index: lift(j) <= target < lift(j+1)
    int lo = int(std::floor((target - lift_[0]) / (2.0 * kPi))) * m - 1;
    while (lift(lo + 1) <= target) ++lo;
    while (lift(lo) > target) --lo;
    double a = lo * d, b = (lo + 1) * d;
    double x = 0.5 * (a + b);
    for (int it = 0; it < 60; ++it) {
      const double f = evaluate(x) - target;
      if (std::abs(f) < 1e-15) break;
      if (f > 0) b = x;
      else a = x;
      const double df = derivative(x);
      double xn = df > 0 ? x - f / df : 0.5 * (a + b);
      if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
      x = xn;
      if (b - a < 1e-15) break;
    }
    out[k] = x;
  }
  return CircleHomeomorphism(std::move(out));
}

CircleHomeomorphism CircleHomeomorphism::compose(const CircleHomeomorphism& inner, int samples) const {
  if (samples <= 0) samples = std::max(size(), inner.size());
  return from_function([&](double t) { return evaluate(inner.evaluate(t)); }, samples);
}

double CircleHomeomorphism::quasisymmetry_modulus() const {
  const int m = size();
  double worst = 1.0;
  for (int w = 1; w <= m / 4; w *= 2)
    for (int j = 0; j < m; ++j) {
      const double left = lift(j) - lift(j - w), right = lift(j + w) - lift(j);
      worst = std::max({worst, left / right, right / left});
    }
  return worst;
}

}  // namespace calderon
