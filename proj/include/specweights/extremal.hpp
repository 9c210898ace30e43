#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "specweights/density.hpp"
#include "specweights/domain.hpp"
#include "specweights/eigensolve.hpp"

namespace sw {

struct ExtremalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Target { Rho, Sigma };

struct OptimizeOpts {
  int max_iters = 200;
  double floor = 1e-6;
  double step0 = 1.0;
  double step_min = 1e-6;
  double cluster_tol = 1e-2;  // relative gap treated as one cluster
  double tol = 1e-7;          // stop when relative gain per iter falls below
  int restarts = 4;           // perturbation kicks after a stall
  uint64_t seed = 12345;
  SolveOpts solver;
};

struct IterRecord {
  double value;
  double step;
  int cluster_size;
};

struct OptimizationResult {
  DensityField best_field;
  double best_value = 0.0;  // re-solved on best_field; a valid lower bound
  std::vector<IterRecord> history;
  bool converged = false;
};

OptimizationResult maximize_mu1(const Domain& d, Target target,
                                const OptimizeOpts& opts = {});

}  // namespace sw
