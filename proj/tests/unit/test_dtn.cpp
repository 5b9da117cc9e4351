#include <doctest.h>

#include <filesystem>

#include "calderon/dtn.hpp"
#include "calderon/error.hpp"

using namespace calderon;

TEST_CASE("closed-form constant DtN") {
  const dtn::DtnMatrix l = dtn::constant_dtn(2.5, 4);
  CHECK(l(3, 3) == Complex(7.5, 0.0));
  CHECK(l(-2, -2) == Complex(5.0, 0.0));
  CHECK(l(0, 0) == Complex(0.0, 0.0));
  CHECK(l.hermitian_defect() == 0.0);
}

TEST_CASE("FEM DtN of an isotropic constant") {
  const dtn::DtnMatrix l = dtn::dtn_matrix(constant_on_disc(SymTensor::isotropic(2.5)), 0.05, 4);
  for (int n = -4; n <= 4; ++n) CHECK(std::abs(l(n, n) - 2.5 * std::abs(n)) <= 0.03 * 2.5 * std::max(1, std::abs(n)));
  CHECK(l.hermitian_defect() < 1e-8);
  CHECK(l.matrix().col(4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("harmonic extension of cos 2 theta") {
  BoundaryTrace phi(2);
  phi[2] = 0.5;
  phi[-2] = 0.5;
  const dtn::FemSolution u = dtn::solve_dirichlet(identity_conductivity().tensor, phi, 0.05);
  const dtn::PointLocator loc(u.mesh);
  const Complex z = std::polar(0.5, 0.3);
  CHECK(loc.interpolate(u.values, Eigen::Vector2d(z.real(), z.imag())) ==
        doctest::Approx(0.25 * std::cos(0.6)).epsilon(0.01));
}

TEST_CASE("Hilbert transform of the closed form") {
  const dtn::DtnMatrix l = dtn::constant_dtn(1.0, 6);
  BoundaryTrace c(6);
  c[3] = 0.5;
  c[-3] = 0.5;
  const BoundaryTrace s = dtn::hilbert_transform(l, c);
  CHECK(std::abs(s[3] - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(s[-3] - Complex(0.0, 0.5)) < 1e-15);
}

TEST_CASE("transform by the identity homeomorphism is the identity") {
  const dtn::DtnMatrix l = dtn::dtn_matrix(constant_on_disc({4.0, 0.0, 1.0}), 0.05, 6);
  const dtn::DtnMatrix t = dtn::transform_dtn(l, CircleHomeomorphism::identity(64), 6);
  CHECK((t.matrix() - l.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transform by a rotation is a phase conjugation") {
  const double a = 0.3;
  const dtn::DtnMatrix l = dtn::dtn_matrix(constant_on_disc({4.0, 0.0, 1.0}), 0.05, 4);
  const dtn::DtnMatrix t = dtn::transform_dtn(l, CircleHomeomorphism::rotation(a, 64), 4);
  for (int m = -4; m <= 4; ++m)
    for (int n = -4; n <= 4; ++n) CHECK(std::abs(t(m, n) - l(m, n) * std::polar(1.0, (m - n) * a)) < 1e-10);
}

TEST_CASE("NtD inverts DtN on zero-mean modes") {
  const dtn::DtnMatrix l = dtn::constant_dtn(2.0, 3);
  const Eigen::MatrixXcd p = dtn::ntd_matrix(l) * l.matrix();
  for (int n = -3; n <= 3; ++n) CHECK(std::abs(p(n + 3, n + 3) - (n == 0 ? 0.0 : 1.0)) < 1e-12);
}

TEST_CASE("Cauchy pairs satisfy the pairing symmetry") {
  const dtn::DtnMatrix l = dtn::dtn_matrix(constant_on_disc({2.0, 1.0, 2.0}), 0.05, 4);
  CHECK(dtn::cauchy_data(l).pairing_defect() < 1e-10);
}

TEST_CASE("csv round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "calderon_unit_dtn";
  std::filesystem::create_directories(dir);
  const dtn::DtnMatrix l = dtn::dtn_matrix(constant_on_disc({2.0, 1.0, 2.0}), 0.05, 3);
  dtn::write_dtn_csv(dir / "l.csv", l);
  const dtn::DtnMatrix r = dtn::read_dtn_csv(dir / "l.csv");
  CHECK((r.matrix() - l.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.mesh_h() == l.mesh_h());
  CHECK_THROWS_AS(dtn::read_dtn_csv(dir / "missing.csv"), IoError);
}

TEST_CASE("too many modes for the mesh are rejected") {
  CHECK_THROWS_AS(dtn::dtn_matrix(identity_conductivity(), 0.25, 40), InvalidInput);
}

TEST_CASE("conjugate of x is y") {
  const auto mesh = dtn::make_disc_mesh(0.05);
  const dtn::FemOperator op(mesh, identity_conductivity().tensor);
  BoundaryTrace phi(1);
  phi[1] = 0.5;
  phi[-1] = 0.5;
  const dtn::FemSolution u = dtn::solve_dirichlet(op, phi);
  const dtn::FemSolution v = dtn::conjugate_solution(op, u);
  double err = 0.0;
  for (std::size_t i = 0; i < mesh->vertices.size(); ++i) err = std::max(err, std::abs(v.values(Eigen::Index(i)) - mesh->vertices[i].y()));
  CHECK(err < 0.02);
}
