#include <doctest.h>

#include "calderon/cgo.hpp"
#include "calderon/error.hpp"

using namespace calderon;

TEST_CASE("free CGO solution is the exponential") {
  const GridSpec g{2.0, 64};
  const cgo::CgoSolution w = cgo::solve_cgo(RealField(g, 0.0), Complex(3.0, 1.0));
  CHECK(w.method == "exact");
  const Complex z(0.4, -0.2);
  CHECK(std::abs(w.w(z) - std::exp(kI * Complex(3.0, 1.0) * z)) < 1e-12 * std::abs(std::exp(kI * Complex(3.0, 1.0) * z)));
}

TEST_CASE("mu2 of an isotropic conductivity") {
  const GridSpec g{2.0, 16};
  const RealField m = cgo::mu2_from_isotropic(RealField(g, 2.0 / 3.0));
  CHECK(m[0] == doctest::Approx(0.2));
}

TEST_CASE("CGO equation residual for a disc coefficient") {
  const GridSpec g{2.0, 128};
  const RealField mu2 = RealField::sample(g, [](Complex z) { return std::abs(z) < 1.0 ? 0.2 : 0.0; });
  const cgo::CgoSolution w = cgo::solve_cgo(mu2, Complex(2.0, 0.0));
  CHECK(w.residual < 1e-8);
  CHECK(w.multipole_tail < 1e-3);
}

TEST_CASE("coefficients reaching one are rejected") {
  const GridSpec g{2.0, 16};
  CHECK_THROWS_AS(cgo::solve_cgo(RealField(g, 1.0), Complex(1.0, 0.0)), InvalidInput);
}

TEST_CASE("exterior solution for the identity map") {
  const cgo::ExteriorCgo g = cgo::solve_G_from_boundary_data(dtn::hilbert_matrix(dtn::constant_dtn(1.0, 16)), 2.0);
  const Complex z(1.2, 0.7);
  CHECK(std::abs(g.evaluate(z) - std::exp(2.0 * kI * z)) < 1e-10 * std::abs(std::exp(2.0 * kI * z)));
}

TEST_CASE("recovery is exact for the identity") {
  std::vector<Complex> pts{Complex(1.5, 0.0), Complex(0.0, -2.0), Complex(-1.1, 1.1)};
  const std::vector<double> ks{1.0, 4.0};
  const cgo::ExteriorRecovery r =
      cgo::recover_F_exterior(dtn::constant_dtn(1.0, 24), pts, ks, 0.0, [](Complex z) { return z; });
  for (double e : r.max_error_by_k) CHECK(e < 1e-10);
}

TEST_CASE("boundary map of the identity") {
  const std::vector<Complex> b = cgo::recover_boundary_map(dtn::constant_dtn(1.0, 24), 4.0, 64);
  for (int j = 0; j < 64; ++j) CHECK(std::abs(b[j] - std::polar(1.0, 2.0 * kPi * j / 64)) < 1e-10);
}
