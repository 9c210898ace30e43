#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "specweights/domain.hpp"

using namespace sw;

namespace {
constexpr double kPi = std::numbers::pi;

double lump_sum(const Domain& d) {
  double s = 0;
  for (double w : d.lumped_weights()) s += w;
  return s;
}
}  // namespace

TEST_CASE("interval grid and volume") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 50, .length = 2.0});
  CHECK(d.is1d());
  CHECK(d.num_nodes() == 51);
  CHECK(d.elems.size() == 50);
  CHECK(!d.periodic);
  CHECK(d.volume == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lump_sum(d) == doctest::Approx(d.volume).epsilon(1e-12));
}

TEST_CASE("breaks become grid nodes") {
  DomainSpec spec{.kind = Kind::Interval, .N = 10, .length = 1.0};
  spec.breaks = {0.123456, 0.7};
  const Domain d = build_domain(spec);
  bool found1 = false, found2 = false;
  for (double x : d.x) {
    if (std::abs(x - 0.123456) < 1e-14) found1 = true;
    if (std::abs(x - 0.7) < 1e-14) found2 = true;
  }
  CHECK(found1);
  CHECK(found2);
  for (size_t i = 1; i < d.x.size(); ++i) CHECK(d.x[i] > d.x[i - 1]);
}

TEST_CASE("circle is periodic with full circumference") {
  const Domain d =
      build_domain({.kind = Kind::Circle, .N = 64, .length = 2 * kPi});
  CHECK(d.periodic);
  CHECK(d.num_nodes() == 64);
  CHECK(d.elems.size() == 64);
  CHECK(d.volume == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(d.boundary_nodes.empty());
}

TEST_CASE("radial ball volume matches the exact ball volume") {
  for (int n : {2, 3, 4}) {
    const Domain d =
        build_domain({.kind = Kind::RadialBall, .n = n, .N = 100, .radius = 1.0});
    CHECK(d.volume == doctest::Approx(unit_ball_volume(n)).epsilon(1e-10));
    CHECK(d.node_cross.front() == doctest::Approx(0.0));
    CHECK(d.node_cross.back() ==
          doctest::Approx(unit_sphere_area(n)).epsilon(1e-12));
    CHECK(lump_sum(d) == doctest::Approx(d.volume).epsilon(1e-10));
  }
}

TEST_CASE("radial ball scales with the radius") {
  const Domain d =
      build_domain({.kind = Kind::RadialBall, .n = 3, .N = 80, .radius = 2.0});
  CHECK(d.volume == doctest::Approx(8 * unit_ball_volume(3)).epsilon(1e-10));
}

TEST_CASE("disc mesh approximates the unit disc") {
  const Domain d = build_domain(
      {.kind = Kind::Disc, .n = 2, .radius = 1.0, .rings = 40, .sectors = 80});
  CHECK(!d.is1d());
  CHECK(d.volume == doctest::Approx(kPi).epsilon(2e-3));
  CHECK((int)d.boundary_nodes.size() == 80);
  CHECK(lump_sum(d) == doctest::Approx(d.volume).epsilon(1e-10));
}

TEST_CASE("graded disc keeps the outer radius and refines the center") {
  const Domain g = build_domain({.kind = Kind::Disc, .n = 2, .radius = 1.0,
                                 .rings = 20, .sectors = 40, .grade_t = 20.0});
  double rmax = 0;
  for (const auto& p : g.nodes2d) rmax = std::max(rmax, p.norm());
  CHECK(rmax == doctest::Approx(1.0).epsilon(1e-12));
  // grading concentrates nodes near the center
  const Domain u = build_domain({.kind = Kind::Disc, .n = 2, .radius = 1.0,
                                 .rings = 20, .sectors = 40});
  int ng = 0, nu = 0;
  for (const auto& p : g.nodes2d) ng += p.norm() < 0.2;
  for (const auto& p : u.nodes2d) nu += p.norm() < 0.2;
  CHECK(ng > 2 * nu);
}

TEST_CASE("flat torus has no boundary and exact area") {
  const Domain d = build_domain({.kind = Kind::FlatTorus, .N = 16, .length = 1.0});
  CHECK(d.num_nodes() == 256);
  CHECK(d.tris.size() == 2 * 256);
  CHECK(d.boundary_nodes.empty());
  CHECK(d.volume == doctest::Approx(1.0).epsilon(1e-12));
  // every triangle carries positively oriented unwrapped geometry
  for (size_t t = 0; t < d.tris.size(); ++t) {
    const auto& g = d.tri_geo[t];
    const double det = (g[1] - g[0]).x() * (g[2] - g[0]).y() -
                       (g[1] - g[0]).y() * (g[2] - g[0]).x();
    CHECK(std::abs(det) > 1e-12);
    // seam triangles stay geometrically small after unwrapping
    CHECK((g[1] - g[0]).norm() < 0.2);
    CHECK((g[2] - g[0]).norm() < 0.2);
  }
}

TEST_CASE("warped product requires a profile") {
  DomainSpec spec{.kind = Kind::WarpedProduct, .n = 3, .N = 50, .length = 1.0};
  CHECK_THROWS_AS(build_domain(spec), DomainError);
  spec.profile = [](double) { return 1.0; };
  const Domain d = build_domain(spec);
  CHECK(d.volume == doctest::Approx(unit_sphere_area(3)).epsilon(1e-10));
}

TEST_CASE("off mesh ingestion") {
  const char* path = "test_square.off";
  {
    std::ofstream f(path);
    f << "OFF\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n";
  }
  const Domain d = load_off(path);
  std::remove(path);
  CHECK(d.num_nodes() == 4);
  CHECK(d.tris.size() == 2);
  CHECK(d.volume == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.boundary_nodes.size() == 4);
}

TEST_CASE("conformal rescale multiplies volume") {
  const Domain d = build_domain(
      {.kind = Kind::Disc, .n = 2, .radius = 1.0, .rings = 10, .sectors = 20});
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(d.num_nodes(), 2.5);
  const Domain r = conformal_rescale_2d(d, f);
  CHECK(r.volume == doctest::Approx(2.5 * d.volume).epsilon(1e-12));
  CHECK(lump_sum(r) == doctest::Approx(r.volume).epsilon(1e-10));
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(build_domain({.kind = Kind::Interval, .N = 0}), DomainError);
  CHECK_THROWS_AS(
      build_domain({.kind = Kind::Interval, .N = 10, .length = -1.0}),
      DomainError);
  CHECK_THROWS_AS(
      build_domain({.kind = Kind::Disc, .n = 2, .rings = 1, .sectors = 8}),
      DomainError);
}
