#include <doctest.h>

#include "calderon/domains.hpp"
#include "calderon/error.hpp"

using namespace calderon;
using namespace calderon::domains;

TEST_CASE("Moebius chart values") {
  const ConformalChart c = ConformalChart::halfplane();
  CHECK(std::abs(c.map(-kI)) < 1e-15);
  CHECK(std::abs(c.map(0.0) + 1.0) < 1e-15);
  CHECK(std::abs(c.map(1e12) - 1.0) < 1e-11);
  for (double x : {-3.0, -0.2, 0.0, 0.7, 40.0}) CHECK(std::abs(std::abs(c.map(x)) - 1.0) < 1e-14);
  std::vector<Complex> s{Complex(0.3, -0.2), Complex(-4.0, -1.0), Complex(10.0, -0.01)};
  CHECK(c.round_trip_error(s) < 1e-14);
  CHECK(ConformalChart::exterior().round_trip_error(s) < 1e-14);
}

TEST_CASE("chart derivative matches differences") {
  const ConformalChart c = ConformalChart::halfplane();
  const Complex z(0.4, -0.9);
  const double d = 1e-6;
  CHECK(std::abs((c.map(z + d) - c.map(z - d)) / (2 * d) - c.derivative(z)) < 1e-8);
}

TEST_CASE("reflection flips the off-diagonal") {
  const ReflectedConductivity r = reflect_conductivity([](Complex) { return SymTensor{2.0, 0.5, 3.0}; });
  CHECK(r(Complex(0.1, 0.3)) == SymTensor{2.0, 0.5, 3.0});
  CHECK(r(Complex(0.1, -0.3)) == SymTensor{2.0, -0.5, 3.0});
  const ReflectedConductivity d = reflect_conductivity([](Complex) { return SymTensor{2.0, 0.0, 3.0}; });
  CHECK(d(Complex(0.1, -0.3)) == SymTensor{2.0, 0.0, 3.0});
}

TEST_CASE("half plane energy against the Douglas integral") {
  const HalfplaneDtn hp([](Complex) { return SymTensor::identity(); }, 0.04);
  auto phi = [](double x) { return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, 2) : 0.0; };
  CHECK(hp.energy(phi, 0.0) == doctest::Approx(douglas_energy(phi, -1.0, 1.0)).epsilon(0.02));
}

TEST_CASE("half plane rejects conductivities touching the far ring") {
  CHECK_THROWS_AS(HalfplaneDtn([](Complex) { return SymTensor::isotropic(2.0); }, 0.1), InvalidInput);
}

TEST_CASE("exterior constant data") {
  BoundaryTrace one(0);
  one[0] = 1.0;
  const ExteriorSolution u = exterior_to_disc_solve(identity_conductivity(), one, 0.1);
  CHECK(u.evaluate(Complex(3.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exterior rejects support reaching the puncture") {
  CHECK_THROWS_AS(exterior_dtn(constant_on_disc(SymTensor::isotropic(2.0), 20.0), 0.05, 4), InvalidInput);
}

TEST_CASE("partial data of the identity") {
  const PartialData pd = partial_data([](Complex) { return SymTensor::identity(); }, 0.05, 6);
  // Dirichlet sin(n theta) has flux n sin(n theta)
  for (int n = 1; n <= 4; ++n) CHECK(pd.lambda_gamma(n - 1, n - 1) == doctest::Approx(n).epsilon(0.03));
  const dtn::CauchyDataSet set = cauchy_data_from_partial(pd);
  CHECK(set.pairs.front().first[0] == Complex(1.0, 0.0));
  CHECK(cauchy_set_distance(set, dtn::constant_dtn(1.0, 12), 4) < 0.03);
}

TEST_CASE("partial data below the sampling rate is rejected") {
  CHECK_THROWS_AS(partial_data([](Complex) { return SymTensor::identity(); }, 0.2, 20), InvalidInput);
}

TEST_CASE("Beurling-Ahlfors reproduces rotations") {
  const BeurlingAhlfors f(CircleHomeomorphism::rotation(0.4, 128));
  for (Complex w : {Complex(0.0, 0.0), Complex(0.3, -0.5), Complex(-0.8, 0.1)})
    CHECK(std::abs(f.evaluate(w) - w * std::polar(1.0, 0.4)) < 1e-12);
}

TEST_CASE("Beurling-Ahlfors extension of a perturbed map") {
  const BeurlingAhlfors f(CircleHomeomorphism::from_function([](double t) { return t + 0.1 * std::sin(t); }, 128));
  const ExtensionReport r = extension_report(f, GridSpec{1.25, 64});
  CHECK(r.min_jacobian > 0.0);
  CHECK(r.boundary_error < 1e-3);
  CHECK_FALSE(r.warned);
}

TEST_CASE("symmetric extension commutes with the reflection") {
  const auto g = CircleHomeomorphism::from_function([](double t) { return t + 0.1 * std::sin(t); }, 128);
  const auto s = symmetric_extension(g, GridSpec{1.25, 32});
  const Complex w(0.3, 0.4);
  CHECK(std::abs(s(std::conj(w)) - std::conj(s(w))) < 1e-10);
}

TEST_CASE("representative of a constant isotropic conductivity") {
  std::vector<Complex> circle(256);
  for (int j = 0; j < 256; ++j) circle[j] = std::polar(1.0, 2.0 * kPi * j / 256);
  const Representative r = build_representative([](Complex) { return 3.0; }, circle);
  const SymTensor s = r.tensor(Complex(0.2, -0.3));
  CHECK(s.s11 == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(std::abs(s.s12) < 1e-6);
}
