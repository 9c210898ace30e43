#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "specweights/assemble.hpp"

namespace sw {

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Spectrum {
  std::vector<double> values;              // mu_0 <= ... <= mu_count
  Eigen::MatrixXd vectors;                 // M-orthonormal, one per column
  std::vector<double> residuals;           // ||K u - mu M u|| / ||M u||
  std::vector<std::vector<int>> clusters;  // indices grouped by relative gap
};

struct SolveOpts {
  double tol = 1e-8;
  uint64_t seed = 12345;
  double cluster_tol = 1e-6;
  int max_iters = 10000;
  int dense_cutoff = 600;
};

// Returns count+1 eigenpairs (mu_0 ... mu_count).
Spectrum solve_lowest(const AssembledForms& forms, int count,
                      const SolveOpts& opts = {});

}  // namespace sw
