#include <doctest.h>

#include "calderon/beltrami.hpp"
#include "calderon/error.hpp"

using namespace calderon;

TEST_CASE("zero coefficient gives the identity") {
  const GridSpec g{2.0, 64};
  const beltrami::PrincipalSolution p = beltrami::solve_principal(ComplexField(g));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(p.map.values()[k] - g.point(k)) < 1e-14);
}

TEST_CASE("constant coefficient on the disc") {
  const GridSpec g{2.0, 128};
  const Complex c(0.0, 0.5);
  const ComplexField mu = ComplexField::sample(g, [c](Complex z) { return std::abs(z) < 1.0 ? c : Complex(0.0); });
  const beltrami::PrincipalSolution p = beltrami::solve_principal(mu);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Complex z = g.point(k);
    err = std::max(err, std::abs(p.map.values()[k] - (std::abs(z) < 1.0 ? z + c * std::conj(z) : z + c / z)));
  }
  CHECK(err < 2.0 * g.cell());
  CHECK(p.residual < 1e-8);
}

TEST_CASE("coefficients of modulus one are rejected") {
  const GridSpec g{2.0, 32};
  const ComplexField mu(g, Complex(1.0, 0.0));
  CHECK_THROWS_AS(beltrami::solve_principal(mu), InvalidInput);
}

TEST_CASE("isotropizing the identity is trivial") {
  const GridSpec g{2.0, 64};
  const beltrami::Isotropization iso = beltrami::isotropize(ConductivityTensor::identity(g));
  CHECK(iso.anisotropy_defect < 1e-14);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(iso.sigma_tilde[k] == doctest::Approx(1.0));
}

TEST_CASE("isotropizing a constant anisotropic tensor") {
  const GridSpec g{2.0, 128};
  const beltrami::Isotropization iso =
      beltrami::isotropize(ConductivityTensor::sample(constant_on_disc({4.0, 0.0, 1.0}), g, 4));
  CHECK(iso.anisotropy_defect < 1e-3);
  CHECK(iso.det_defect < 1e-8);
  // sqrt(det sigma) inside the image
  CHECK(iso.sigma_tilde.nearest(Complex(0.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-6));
}
