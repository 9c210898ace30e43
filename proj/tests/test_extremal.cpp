#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specweights/assemble.hpp"
#include "specweights/density.hpp"
#include "specweights/eigensolve.hpp"
#include "specweights/extremal.hpp"

using namespace sw;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("torus mass optimization stays at the homogeneous maximizer") {
  const Domain d = build_domain({.kind = Kind::FlatTorus, .N = 16, .length = 1.0});
  const DensityField one = constant_density(d, 1.0);
  const double mu_const =
      solve_lowest(assemble(d, one, one, BC::Neumann), 1).values[1];
  OptimizeOpts opts;
  opts.max_iters = 60;
  opts.restarts = 1;
  const OptimizationResult r = maximize_mu1(d, Target::Rho, opts);
  CHECK(r.best_value >= mu_const * 0.999);
  CHECK(r.best_value <= mu_const * 1.02);
  CHECK(mu_const == doctest::Approx(4 * kPi * kPi).epsilon(0.02));
}

TEST_CASE("the reported value is the re-solved eigenvalue of the field") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 60, .length = 1.0});
  OptimizeOpts opts;
  opts.max_iters = 40;
  opts.restarts = 0;
  const OptimizationResult r = maximize_mu1(d, Target::Rho, opts);
  const DensityField one = constant_density(d, 1.0);
  const double mu =
      solve_lowest(assemble(d, r.best_field, one, BC::Neumann), 1).values[1];
  CHECK(r.best_value == doctest::Approx(mu).epsilon(1e-10));
}

TEST_CASE("the optimized field is admissible") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 60, .length = 1.0});
  OptimizeOpts opts;
  opts.max_iters = 40;
  opts.floor = 1e-3;
  const OptimizationResult r = maximize_mu1(d, Target::Rho, opts);
  CHECK(density_mean(d, r.best_field.values) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.best_field.values.minCoeff() >= opts.floor - 1e-12);
  REQUIRE(!r.history.empty());
  for (const auto& rec : r.history) {
    CHECK(std::isfinite(rec.value));
    CHECK(rec.value <= r.best_value * (1 + 1e-9));
  }
}

TEST_CASE("interval mass optimization beats the flat density") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 100, .length = 1.0});
  const DensityField one = constant_density(d, 1.0);
  const double mu_const =
      solve_lowest(assemble(d, one, one, BC::Neumann), 1).values[1];
  OptimizeOpts opts;
  opts.max_iters = 120;
  const OptimizationResult r = maximize_mu1(d, Target::Rho, opts);
  CHECK(r.best_value > mu_const * 1.05);
}

TEST_CASE("circle conductivity cannot improve on a constant") {
  const Domain d =
      build_domain({.kind = Kind::Circle, .N = 80, .length = 2 * kPi});
  const DensityField one = constant_density(d, 1.0);
  const double mu_const =
      solve_lowest(assemble(d, one, one, BC::Neumann), 1).values[1];
  OptimizeOpts opts;
  opts.max_iters = 60;
  opts.restarts = 1;
  const OptimizationResult r = maximize_mu1(d, Target::Sigma, opts);
  CHECK(r.best_value <= mu_const * (1 + 1e-6));
  CHECK(r.best_value >= mu_const * (1 - 1e-6));
}

TEST_CASE("results are deterministic for a fixed seed") {
  const Domain d = build_domain({.kind = Kind::Interval, .N = 40, .length = 1.0});
  OptimizeOpts opts;
  opts.max_iters = 25;
  const OptimizationResult a = maximize_mu1(d, Target::Rho, opts);
  const OptimizationResult b = maximize_mu1(d, Target::Rho, opts);
  CHECK(a.best_value == b.best_value);
  CHECK((a.best_field.values - b.best_field.values).cwiseAbs().maxCoeff() == 0.0);
}
