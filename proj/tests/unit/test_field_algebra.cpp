#include <doctest.h>

#include "calderon/error.hpp"
#include "calderon/field_algebra.hpp"

using namespace calderon;
using doctest::Approx;

TEST_CASE("mu coefficients of diag(4,1)") {
  const SymTensor s{4.0, 0.0, 1.0};
  CHECK(pointwise::mu1(s).real() == Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(pointwise::mu1(s).imag() == Approx(0.0));
  CHECK(pointwise::mu2(s) == Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("identity has vanishing coefficients") {
  const SymTensor s = SymTensor::identity();
  CHECK(std::abs(pointwise::mu1(s)) == 0.0);
  CHECK(pointwise::mu2(s) == 0.0);
  const NuPair n = pointwise::sigma_to_nu(s);
  CHECK(std::abs(n.nu1) == 0.0);
  CHECK(n.nu2 == 0.0);
}

TEST_CASE("nu from mu closed form") {
  const NuPair n = pointwise::nu_from_mu(-1.0 / 3.0, -1.0 / 3.0);
  CHECK(n.nu1.real() == Approx(-0.3).epsilon(1e-14));
  CHECK(n.nu2 == Approx(-0.3).epsilon(1e-14));
  // |nu1| + |nu2| = (|mu1| + |mu2|) / (1 + |mu1||mu2|)
  const NuPair m = pointwise::nu_from_mu(std::polar(1.0 / 3.0, 0.7), 1.0 / 3.0);
  CHECK(std::abs(m.nu1) + std::abs(m.nu2) == Approx(0.6).epsilon(1e-14));
}

TEST_CASE("mu_from_nu inverts nu_from_mu") {
  for (double a : {0.0, 0.2, 0.6, 0.9})
    for (double b : {-0.8, -0.1, 0.0, 0.5}) {
      const Complex mu1 = std::polar(a, 1.3);
      const NuPair n = pointwise::nu_from_mu(mu1, b);
      const MuPair m = pointwise::mu_from_nu(n.nu1, n.nu2);
      CHECK(std::abs(m.mu1 - mu1) < 1e-10);
      CHECK(std::abs(m.mu2 - b) < 1e-10);
    }
}

TEST_CASE("sigma round trips through nu") {
  const SymTensor s{2.0, 1.0, 2.0};
  const NuPair n = pointwise::sigma_to_nu(s);
  const SymTensor back = pointwise::nu_to_sigma(n.nu1, n.nu2);
  CHECK(back.s11 == Approx(2.0).epsilon(1e-12));
  CHECK(back.s12 == Approx(1.0).epsilon(1e-12));
  CHECK(back.s22 == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hat divides by the determinant") {
  const SymTensor h = pointwise::hat({2.0, 1.0, 2.0});
  CHECK(h.s11 == Approx(2.0 / 3.0));
  CHECK(h.s12 == Approx(1.0 / 3.0));
  CHECK(h.det() == Approx(1.0 / 3.0));
}

TEST_CASE("pushforward by a rotation rotates the tensor") {
  const double a = 0.4;
  const SymTensor s{4.0, 0.0, 1.0};
  const SymTensor p = pointwise::pushforward(s, std::polar(1.0, a), 0.0);
  Eigen::Matrix2d r;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  const Eigen::Matrix2d e = r * s.matrix() * r.transpose();
  CHECK((p.matrix() - e).norm() < 1e-14);
  CHECK(p.det() == Approx(s.det()));
}

TEST_CASE("pushforward by z + c zbar isotropizes its own coefficient") {
  // F = z - mu1 zbar... the principal map with dF/dzbar = mu1 dF/dz
  const SymTensor s{4.0, 0.0, 1.0};
  const Complex mu = pointwise::mu1(s);
  const SymTensor p = pointwise::pushforward(s, 1.0, mu);
  CHECK(p.anisotropy() == Approx(1.0).epsilon(1e-12));
  CHECK(p.det() == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("ellipticity constant") {
  const GridSpec g{2.0, 32};
  CHECK(ellipticity_constant(ConductivityTensor::identity(g)) == Approx(1.0));
  CHECK(ellipticity_constant(ConductivityTensor::sample(constant_on_disc({4.0, 0.0, 1.0}), g)) == Approx(4.0));
  CHECK(ellipticity_constant(ConductivityTensor::sample(constant_on_disc(SymTensor::isotropic(2.0)), g)) ==
        Approx(2.0));
}

TEST_CASE("degenerate tensors are rejected") {
  const GridSpec g{2.0, 16};
  std::vector<double> a(g.size(), 1.0), b(g.size(), 1.0), c(g.size(), 1.0);
  std::vector<std::uint8_t> mask(g.size(), 1);
  CHECK_THROWS_AS(ConductivityTensor(g, a, b, c, mask), InvalidInput);
}

TEST_CASE("sampled maps invert") {
  const DiffeoMap f = DiffeoMap::sample(linear_beltrami_map(Complex(0.3, 0.1)), GridSpec{2.0, 128});
  for (Complex x : {Complex(0.1, 0.2), Complex(-0.5, 0.4), Complex(0.7, -0.6)}) {
    const Complex y = f.evaluate(x);
    CHECK(std::abs(f.inverse(y) - x) < 1e-6);
  }
}

TEST_CASE("closed-form pushforward keeps sigma outside the support") {
  const ConductivityModel p = pushforward(constant_on_disc({4.0, 0.0, 1.0}), radial_shear_map(0.5));
  CHECK(p.tensor(Complex(1.5, 0.0)) == SymTensor::identity());
  CHECK(p.tensor(Complex(0.3, 0.2)).det() == Approx(4.0).epsilon(1e-10));
}
