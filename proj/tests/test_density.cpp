#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specweights/assemble.hpp"
#include "specweights/density.hpp"
#include "specweights/eigensolve.hpp"

using namespace sw;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("family names round trip") {
  for (const char* name :
       {"concentration_i", "conductivity_ii", "witten_iii", "buser_sigma",
        "buser_rho", "cap_rho_t", "blowup_phi", "neck_gamma", "cylinder_sigma"})
    CHECK(family_to_string(family_from_string(name)) == name);
  CHECK_THROWS_AS(family_from_string("nonsense"), DensityError);
}

TEST_CASE("normalization is idempotent and rescales mu1 linearly") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 64, .length = 1.0});
  Eigen::VectorXd v(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) v[i] = 1.0 + d.x[i] * d.x[i];
  const DensityField f = nodal_density(d, v);
  const DensityField g = normalize_mean(d, f);
  CHECK(density_mean(d, g.values) == doctest::Approx(1.0).epsilon(1e-13));
  const DensityField h = normalize_mean(d, g);
  CHECK((h.values - g.values).cwiseAbs().maxCoeff() < 1e-14);

  const DensityField one = constant_density(d, 1.0);
  const double mu_f = solve_lowest(assemble(d, f, one, BC::Neumann), 1).values[1];
  const double mu_g = solve_lowest(assemble(d, g, one, BC::Neumann), 1).values[1];
  CHECK(mu_g == doctest::Approx(mu_f * f.mean).epsilon(1e-11));
}

TEST_CASE("concentration family takes the prescribed plateau values") {
  const double eps = 0.1;
  DomainSpec spec{.kind = Kind::RadialBall, .n = 3, .N = 100, .radius = 1.0};
  spec.breaks = {eps, 2 * eps};
  const Domain d = build_domain(spec);
  const DensityField rho =
      make_density(d, {.family = Family::ConcentrationI, .eps = eps});
  for (int i = 0; i < d.num_nodes(); ++i) {
    if (d.x[i] <= eps + 1e-12)
      CHECK(rho.values[i] == doctest::Approx(std::pow(eps, -3)).epsilon(1e-12));
    if (d.x[i] >= 2 * eps - 1e-12)
      CHECK(rho.values[i] == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("buser families solve a mean-one plateau inside the bracket") {
  DomainSpec spec{.kind = Kind::RadialBall, .n = 2, .N = 400, .radius = 1.0};
  spec.breaks = {0.02, 0.04};
  const Domain d = build_domain(spec);
  FamilySpec fs{.family = Family::BuserSigma, .eps = 0.02, .a = 0.5};
  const DensityField sig = make_density(d, fs);
  CHECK(density_mean(d, sig.values) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fs.solved_b >= buser_b_lower(2, 0.02, 0.5));
  CHECK(fs.solved_b <= buser_b_upper(2, 0.02, 0.5));

  FamilySpec fr{.family = Family::BuserRho, .eps = 0.02, .a = 0.5};
  const DensityField rho = make_density(d, fr);
  CHECK(density_mean(d, rho.values) == doctest::Approx(1.0).epsilon(1e-10));
  // the sharp step sits at eps; the interface cell shifts b slightly downward
  CHECK(fr.solved_b <= buser_b_upper(2, 0.02, 0.5) + 1e-12);
  CHECK(fr.solved_b == doctest::Approx(buser_b_upper(2, 0.02, 0.5)).epsilon(0.05));
}

TEST_CASE("cap density has the exact spherical mass") {
  const Domain d = build_domain(
      {.kind = Kind::Disc, .n = 2, .radius = 1.0, .rings = 40, .sectors = 80});
  const DensityField rho = make_density(d, {.family = Family::CapRhoT, .t = 1.0});
  CHECK(rho.values.maxCoeff() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(density_mean(d, rho.values) * d.volume ==
        doctest::Approx(2 * kPi).epsilon(2e-3));
}

TEST_CASE("blowup density has mean one and bounded range") {
  const Domain d = build_domain({.kind = Kind::FlatTorus, .N = 24, .length = 1.0});
  FamilySpec fs{.family = Family::BlowupPhi, .eps = 0.05};
  const DensityField rho = make_density(d, fs);
  CHECK(density_mean(d, rho.values) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rho.values.minCoeff() == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(rho.values.maxCoeff() <= 2.0 + 1e-12);
}

TEST_CASE("witten family rejects overlapping balls") {
  const Domain d = build_domain({.kind = Kind::FlatTorus, .N = 24, .length = 1.0});
  FamilySpec fs{.family = Family::WittenIII, .eps = 0.3, .k = 1};
  fs.centers = {{0.25, 0.25}, {0.3, 0.3}};
  CHECK_THROWS_AS(make_density(d, fs), DensityError);
}

TEST_CASE("dumbbell profile geometry") {
  const auto base = dumbbell_profile(1.0);
  const auto pinched = dumbbell_profile(0.1);
  const double c = kPi / 2;
  CHECK(base(0.0) == doctest::Approx(0.0));
  CHECK(base(c) == doctest::Approx(1.0));
  CHECK(base(c + 2.0) == doctest::Approx(1.0));
  CHECK(pinched(c + 2.0) == doctest::Approx(0.1));
  CHECK(pinched(c + 2.4) == doctest::Approx(0.1));
  CHECK(pinched(c + 3.5) == doctest::Approx(1.0));
  CHECK(pinched(dumbbell_length()) == doctest::Approx(0.0));
  CHECK_THROWS_AS(dumbbell_profile(0.0), DensityError);
  CHECK_THROWS_AS(dumbbell_profile(1.5), DensityError);
}

TEST_CASE("cylinder sigma compensates the neck cross-section") {
  const double eps = 0.2;
  DomainSpec spec{.kind = Kind::WarpedProduct, .n = 3, .N = 400,
                  .length = dumbbell_length()};
  spec.profile = dumbbell_profile(eps);
  const Domain d = build_domain(spec);
  FamilySpec fs{.family = Family::CylinderSigma, .eps = eps,
                .t0 = kPi / 2, .t1 = kPi / 2 + 4.0};
  const DensityField sig = make_density(d, fs);
  for (int i = 0; i < d.num_nodes(); ++i) {
    if (d.x[i] > fs.t0 && d.x[i] < fs.t1 && d.node_cross[i] > 0)
      CHECK(sig.values[i] * d.node_cross[i] ==
            doctest::Approx(unit_sphere_area(3)).epsilon(1e-10));
    if (d.x[i] < fs.t0 - 0.1 || d.x[i] > fs.t1 + 0.1)
      CHECK(sig.values[i] == doctest::Approx(1.0));
  }
}

TEST_CASE("plateau test function hits its prescribed values") {
  DomainSpec spec{.kind = Kind::RadialBall, .n = 2, .N = 100, .radius = 1.0};
  spec.breaks = {0.2, 0.4};
  const Domain d = build_domain(spec);
  const Eigen::VectorXd u =
      make_test_function(d, {.shape = TestShape::Plateau, .r = 0.2, .R = 0.4});
  for (int i = 0; i < d.num_nodes(); ++i) {
    if (d.x[i] <= 0.2 + 1e-12) CHECK(u[i] == doctest::Approx(1.0));
    if (d.x[i] >= 0.4 - 1e-12) CHECK(u[i] == doctest::Approx(0.0));
  }
}

TEST_CASE("cylinder tent mass meets the proof floor") {
  const double eps = 0.1;
  const int k = 1;
  DomainSpec spec{.kind = Kind::WarpedProduct, .n = 2,
                  .N = (int)(60 * capped_cylinder_length(eps)),
                  .length = capped_cylinder_length(eps)};
  spec.profile = capped_cylinder_profile(eps);
  const Domain d = build_domain(spec);
  const DensityField one = constant_density(d, 1.0);
  const AssembledForms f = assemble(d, one, one, BC::Neumann);
  for (int j = 0; j < 2 * (k + 1); ++j) {
    const Eigen::VectorXd u = make_test_function(
        d, {.shape = TestShape::CylinderTent, .k = k, .j = j, .eps = eps,
            .t0 = kPi / 2});
    const double mass = u.dot(f.M * u);
    const double floor = 2 * unit_ball_volume(2) / (6 * (k + 1) * eps);
    CHECK(mass >= floor * 0.95);
  }
}

TEST_CASE("density mean uses the geometric measure") {
  const Domain d = build_domain({.kind = Kind::RadialBall, .n = 3, .N = 200});
  Eigen::VectorXd v(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) v[i] = d.x[i];  // rho = r
  // average of r over the unit 3-ball is 3/4
  CHECK(density_mean(d, v) == doctest::Approx(0.75).epsilon(1e-6));
}
