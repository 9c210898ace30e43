#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "specweights/density.hpp"
#include "specweights/domain.hpp"

namespace sw {

struct HerschError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Conformal dilation of S^p with parameter xi in the open unit ball.
struct MobiusMap {
  Eigen::VectorXd xi;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double residual = 0.0;  // norm of the pushed-forward barycenter
  int iterations = 0;
};

// Stereographic cap lift: phi_t(z) = (2 t z, t^2|z|^2 - 1) / (t^2|z|^2 + 1).
Eigen::Vector3d lift_point(const Eigen::Vector2d& z, double t = 1.0);
std::vector<Eigen::Vector3d> lift_to_sphere(const Domain& d, double t = 1.0);

MobiusMap center_measure(const std::vector<Eigen::Vector3d>& points,
                         const std::vector<double>& masses, double tol = 1e-10,
                         int max_iters = 5000);

struct HerschBound {
  double bound = 0.0;         // certified discrete upper bound on mu_1(rho,1)
  double analytic_cap = 0.0;  // 8 pi / |M| for n = 2
  double centering_residual = 0.0;
};

HerschBound hersch_trial_bound(const Domain& d, const DensityField& rho);

}  // namespace sw
