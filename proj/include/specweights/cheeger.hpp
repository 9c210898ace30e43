#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specweights/density.hpp"
#include "specweights/domain.hpp"

namespace sw {

struct CheegerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CheegerMethod { Scan1D, Sweep, CandidateBalls };

struct CheegerEstimate {
  double value = 0.0;
  CheegerMethod method = CheegerMethod::Scan1D;
  bool certified = false;  // exact over the candidate class (scan_1d only)
  // witness: a union of cell-index intervals [first, last] (1-D) or the
  // threshold + node set of a level cut (2-D sweep)
  std::vector<std::pair<int, int>> intervals;
  double threshold = 0.0;
  std::vector<int> cells;
  double cut_weight = 0.0;   // sigma-perimeter of the witness
  double rho_volume = 0.0;   // rho-volume of the witness
  double sigma_volume = 0.0; // must be <= half the total sigma-volume
};

struct CheegerOpts {
  int max_components = 2;                 // interval unions for scan_1d
  std::optional<Eigen::VectorXd> level_function;  // sweep (default: u_1)
  std::vector<Eigen::Vector2d> ball_centers;      // candidate_balls
  std::vector<double> ball_radii;
};

CheegerEstimate cheeger_constant(const Domain& d, const DensityField& rho,
                                 const DensityField& sigma, CheegerMethod method,
                                 const CheegerOpts& opts = {});

}  // namespace sw
