#pragma once

#include <Eigen/Sparse>
#include <stdexcept>
#include <vector>

#include "specweights/density.hpp"
#include "specweights/domain.hpp"

namespace sw {

enum class BC { Neumann, Dirichlet };

struct AssembleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssembledForms {
  Eigen::SparseMatrix<double> K;  // stiffness, sigma-weighted
  Eigen::SparseMatrix<double> M;  // consistent mass, rho-weighted
  BC bc = BC::Neumann;
  int ell = 0;
  // map node index -> dof index (-1 for eliminated nodes); identity for Neumann
  std::vector<int> dof_of_node;
  int num_dofs() const { return (int)K.rows(); }
};

AssembledForms assemble(const Domain& d, const DensityField& rho,
                        const DensityField& sigma, BC bc = BC::Neumann);

double rayleigh_quotient(const AssembledForms& f, const Eigen::VectorXd& u);

// Restrict a nodal vector to the dof vector of the given forms.
Eigen::VectorXd restrict_to_dofs(const AssembledForms& f,
                                 const Eigen::VectorXd& nodal);

}  // namespace sw
