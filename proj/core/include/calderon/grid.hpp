#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "calderon/error.hpp"

namespace calderon {

using Complex = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Cell-centred square grid on [-L, L]^2 with n cells per axis.
// Storage is row-major: index = j * n + i, i along x, j along y.
struct GridSpec {
  double half_width = 2.0;
  int n = 256;

  double cell() const noexcept { return 2.0 * half_width / n; }
  double cell_area() const noexcept { return cell() * cell(); }
  std::size_t size() const noexcept { return std::size_t(n) * std::size_t(n); }
  double coord(int i) const noexcept { return -half_width + (i + 0.5) * cell(); }
  Complex point(int i, int j) const noexcept { return {coord(i), coord(j)}; }
  Complex point(std::size_t idx) const noexcept {
    return point(int(idx % std::size_t(n)), int(idx / std::size_t(n)));
  }
  std::size_t index(int i, int j) const noexcept { return std::size_t(j) * std::size_t(n) + std::size_t(i); }
  bool contains(Complex z) const noexcept {
    return std::abs(z.real()) <= half_width && std::abs(z.imag()) <= half_width;
  }

  // n must be a power of two >= 16 and L > 0.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

template <class T>
class Field {
 public:
  using value_type = T;

  Field() = default;
  explicit Field(GridSpec grid, T fill = T{}) : grid_(grid), values_(grid.size(), fill) { grid_.validate(); }
  Field(GridSpec grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.size()) throw InvalidInput("field size does not match grid");
  }

  template <class Fn>
  static Field sample(GridSpec grid, Fn&& fn) {
    Field f(grid);
    for (std::size_t k = 0; k < f.values_.size(); ++k) f.values_[k] = fn(grid.point(k));
    return f;
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }
  T& operator[](std::size_t k) noexcept { return values_[k]; }
  const T& operator[](std::size_t k) const noexcept { return values_[k]; }
  T& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }

  // Bilinear interpolation through cell centres. Points between the outer
  // centres and the box edge use the edge cells linearly.
  T interpolate(Complex z) const {
    if (!grid_.contains(z)) throw InvalidInput("interpolation point outside grid box");
    const double h = grid_.cell();
    const double u = (z.real() + grid_.half_width) / h - 0.5;
    const double v = (z.imag() + grid_.half_width) / h - 0.5;
    int i0 = std::clamp(int(std::floor(u)), 0, grid_.n - 2);
    int j0 = std::clamp(int(std::floor(v)), 0, grid_.n - 2);
    const double s = u - i0, t = v - j0;
    const T a = (*this)(i0, j0), b = (*this)(i0 + 1, j0);
    const T c = (*this)(i0, j0 + 1), d = (*this)(i0 + 1, j0 + 1);
    return (1 - t) * ((1 - s) * a + s * b) + t * ((1 - s) * c + s * d);
  }

  // Value of the cell containing z.
  T nearest(Complex z) const {
    if (!grid_.contains(z)) throw InvalidInput("lookup point outside grid box");
    const double h = grid_.cell();
    int i = std::clamp(int(std::floor((z.real() + grid_.half_width) / h)), 0, grid_.n - 1);
    int j = std::clamp(int(std::floor((z.imag() + grid_.half_width) / h)), 0, grid_.n - 1);
    return (*this)(i, j);
  }

 private:
  GridSpec grid_;
  std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

template <class T>
double sup_norm(const Field<T>& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, double(std::abs(v)));
  return m;
}

// Discrete L2 norm including the cell area.
template <class T>
double l2_norm(const Field<T>& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return std::sqrt(s * f.grid().cell_area());
}

}  // namespace calderon
