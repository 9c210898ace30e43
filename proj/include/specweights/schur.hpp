#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "specweights/density.hpp"
#include "specweights/domain.hpp"
#include "specweights/eigensolve.hpp"

namespace sw {

struct SchurError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Partition {
  std::vector<int> inner_nodes;      // M0
  std::vector<int> exterior_nodes;   // complement interior
  std::vector<int> interface_nodes;  // inner nodes touching exterior cells
  std::vector<bool> cell_inner;      // per 1-D element / triangle
};

// Cells whose every quadrature point (1-D) / every vertex (2-D) satisfies the
// predicate on the node coordinate become M0 cells.
Partition make_partition(const Domain& d,
                         const std::function<bool(double, double)>& inside);

// Eigenvalues of the Schur complement of the (1,1)-stiffness eliminating the
// exterior against the rho-mass restricted to M0 cells.
Spectrum gamma_spectrum(const Domain& d, const Partition& part,
                        const DensityField& rho, int count,
                        const SolveOpts& opts = {});

struct ZerorhoRow {
  double eps;
  std::vector<double> mu;     // mu_1..mu_count of (rho_eps, 1)
  std::vector<double> gamma;  // gamma_1..gamma_count
  double rel_error;           // max_k |mu_k - gamma_k| / gamma_k
};

std::vector<ZerorhoRow> zerorho_convergence(const Domain& d,
                                            const Partition& part,
                                            const DensityField& rho,
                                            const std::vector<double>& eps_list,
                                            int count,
                                            const SolveOpts& opts = {});

}  // namespace sw
