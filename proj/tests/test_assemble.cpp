#include <doctest.h>

#include <numbers>

#include "specweights/assemble.hpp"
#include "specweights/density.hpp"

using namespace sw;

namespace {

Domain interval(int N = 40) {
  return build_domain({.kind = Kind::Interval, .N = N, .length = 1.0});
}

Domain torus(int N = 12) {
  return build_domain({.kind = Kind::FlatTorus, .N = N, .length = 1.0});
}

}  // namespace

TEST_CASE("constants lie in the Neumann stiffness kernel") {
  for (const Domain& d :
       {interval(), torus(),
        build_domain({.kind = Kind::Circle, .N = 30, .length = 1.0}),
        build_domain({.kind = Kind::RadialBall, .n = 3, .N = 30}),
        build_domain({.kind = Kind::Disc, .n = 2, .rings = 8, .sectors = 16})}) {
    const DensityField one = constant_density(d, 1.0);
    const AssembledForms f = assemble(d, one, one, BC::Neumann);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(f.num_dofs());
    CHECK((f.K * ones).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("mass integrates the density") {
  const Domain d = torus();
  Eigen::VectorXd v(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i)
    v[i] = 1.0 + 0.5 * std::sin(2 * std::numbers::pi * d.nodes2d[i].x());
  const DensityField rho = nodal_density(d, v);
  const AssembledForms f = assemble(d, rho, constant_density(d, 1.0), BC::Neumann);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(f.num_dofs());
  CHECK(ones.dot(f.M * ones) ==
        doctest::Approx(rho.mean * d.volume).epsilon(1e-12));
}

TEST_CASE("forms scale linearly in the densities") {
  const Domain d = interval();
  const DensityField one = constant_density(d, 1.0);
  const DensityField three = constant_density(d, 3.0);
  const AssembledForms base = assemble(d, one, one, BC::Neumann);
  const AssembledForms rs = assemble(d, three, one, BC::Neumann);
  const AssembledForms ss = assemble(d, one, three, BC::Neumann);
  Eigen::VectorXd u(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) u[i] = std::cos(3.0 * d.x[i]);
  CHECK(u.dot(rs.M * u) == doctest::Approx(3 * u.dot(base.M * u)).epsilon(1e-13));
  CHECK(u.dot(ss.K * u) == doctest::Approx(3 * u.dot(base.K * u)).epsilon(1e-13));
  CHECK(u.dot(rs.K * u) == doctest::Approx(u.dot(base.K * u)).epsilon(1e-13));
}

TEST_CASE("dirichlet removes boundary unknowns") {
  const Domain d = interval(20);
  const DensityField one = constant_density(d, 1.0);
  const AssembledForms f = assemble(d, one, one, BC::Dirichlet);
  CHECK(f.num_dofs() == d.num_nodes() - 2);
  CHECK(f.dof_of_node.front() == -1);
  CHECK(f.dof_of_node.back() == -1);
}

TEST_CASE("dirichlet on a radial ball keeps the center unknown") {
  const Domain d = build_domain({.kind = Kind::RadialBall, .n = 2, .N = 30});
  const DensityField one = constant_density(d, 1.0);
  const AssembledForms f = assemble(d, one, one, BC::Dirichlet);
  CHECK(f.num_dofs() == d.num_nodes() - 1);
  CHECK(f.dof_of_node.front() == 0);
  CHECK(f.dof_of_node.back() == -1);
}

TEST_CASE("angular modes eliminate degenerate cross-section nodes") {
  const Domain d =
      build_domain({.kind = Kind::RadialBall, .n = 2, .N = 30, .ell = 1});
  const DensityField one = constant_density(d, 1.0);
  const AssembledForms f = assemble(d, one, one, BC::Neumann);
  CHECK(f.num_dofs() == d.num_nodes() - 1);
  CHECK(f.dof_of_node.front() == -1);
}

TEST_CASE("invalid inputs are rejected") {
  const Domain d = interval(10);
  const DensityField one = constant_density(d, 1.0);
  DensityField bad = one;
  bad.values[3] = -1.0;
  CHECK_THROWS_AS(assemble(d, bad, one, BC::Neumann), AssembleError);
  DensityField small;
  small.values = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(assemble(d, small, one, BC::Neumann), AssembleError);
  const Domain c = build_domain({.kind = Kind::Circle, .N = 16, .length = 1.0});
  CHECK_THROWS_AS(
      assemble(c, constant_density(c, 1.0), constant_density(c, 1.0),
               BC::Dirichlet),
      AssembleError);
}

TEST_CASE("rayleigh quotient validates the trial vector") {
  const Domain d = interval(10);
  const DensityField one = constant_density(d, 1.0);
  const AssembledForms f = assemble(d, one, one, BC::Neumann);
  CHECK_THROWS_AS(rayleigh_quotient(f, Eigen::VectorXd::Zero(f.num_dofs())),
                  AssembleError);
  Eigen::VectorXd u = Eigen::VectorXd::Ones(f.num_dofs());
  CHECK(rayleigh_quotient(f, u) == doctest::Approx(0.0).epsilon(1e-12));
}
