#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specweights/cheeger.hpp"
#include "specweights/density.hpp"

using namespace sw;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("unit interval halves at the midpoint") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 160, .length = 1.0});
  const DensityField one = constant_density(d, 1.0);
  const CheegerEstimate e =
      cheeger_constant(d, one, one, CheegerMethod::Scan1D);
  CHECK(e.certified);
  CHECK(e.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(e.cut_weight == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(e.rho_volume == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(e.sigma_volume <= 0.5 + 1e-12);
}

TEST_CASE("circle needs two cut points") {
  const Domain d =
      build_domain({.kind = Kind::Circle, .N = 128, .length = 2 * kPi});
  const DensityField one = constant_density(d, 1.0);
  const CheegerEstimate e =
      cheeger_constant(d, one, one, CheegerMethod::Scan1D);
  CHECK(e.value == doctest::Approx(2 / kPi).epsilon(1e-10));
  CHECK(e.cut_weight == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("a conductivity dip pins the optimal cut") {
  DomainSpec spec{.kind = Kind::Interval, .N = 100, .length = 1.0};
  spec.breaks = {0.3};
  const Domain d = build_domain(spec);
  Eigen::VectorXd sv = Eigen::VectorXd::Ones(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i)
    if (std::abs(d.x[i] - 0.3) < 1e-12) sv[i] = 0.01;
  const DensityField sigma = nodal_density(d, sv);
  const DensityField one = constant_density(d, 1.0);
  const CheegerEstimate e =
      cheeger_constant(d, one, sigma, CheegerMethod::Scan1D);
  CHECK(e.value == doctest::Approx(0.01 / 0.3).epsilon(1e-10));
  CHECK(e.rho_volume == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("more components can only improve the scan") {
  DomainSpec spec{.kind = Kind::Interval, .N = 120, .length = 1.0};
  const Domain d = build_domain(spec);
  Eigen::VectorXd rv(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i)
    rv[i] = 1.0 + 4.0 * std::exp(-50 * (d.x[i] - 0.15) * (d.x[i] - 0.15)) +
            4.0 * std::exp(-50 * (d.x[i] - 0.85) * (d.x[i] - 0.85));
  const DensityField rho = nodal_density(d, rv);
  const DensityField one = constant_density(d, 1.0);
  CheegerOpts one_comp;
  one_comp.max_components = 1;
  CheegerOpts two_comp;
  two_comp.max_components = 2;
  const double h1 =
      cheeger_constant(d, rho, one, CheegerMethod::Scan1D, one_comp).value;
  const double h2 =
      cheeger_constant(d, rho, one, CheegerMethod::Scan1D, two_comp).value;
  CHECK(h2 <= h1 + 1e-12);
}

TEST_CASE("sweep never beats the certified scan") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 120, .length = 1.0});
  Eigen::VectorXd rv(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) rv[i] = 1.0 + d.x[i];
  const DensityField rho = nodal_density(d, rv);
  const DensityField one = constant_density(d, 1.0);
  const CheegerEstimate scan =
      cheeger_constant(d, rho, one, CheegerMethod::Scan1D);
  const CheegerEstimate sweep =
      cheeger_constant(d, rho, one, CheegerMethod::Sweep);
  CHECK(scan.certified);
  CHECK(!sweep.certified);
  CHECK(sweep.value >= scan.value - 1e-9);
}

TEST_CASE("candidate balls reproduce the perimeter to volume ratio") {
  const Domain d = build_domain(
      {.kind = Kind::Disc, .n = 2, .radius = 1.0, .rings = 40, .sectors = 80});
  const DensityField one = constant_density(d, 1.0);
  CheegerOpts opts;
  opts.ball_centers = {{0.0, 0.0}};
  opts.ball_radii = {0.5};
  const CheegerEstimate e =
      cheeger_constant(d, one, one, CheegerMethod::CandidateBalls, opts);
  // circle of radius 1/2: perimeter pi over area pi/4
  CHECK(e.value == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e.rho_volume == doctest::Approx(kPi / 4).epsilon(0.05));
}
