#include "specweights/eigensolve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "specweights/util.hpp"

namespace sw {

namespace {

std::vector<std::vector<int>> make_clusters(const std::vector<double>& vals,
                                            double rel_tol, double abs_floor) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < (int)vals.size(); ++i) {
    if (!out.empty()) {
      const double prev = vals[out.back().back()];
      const double scale = std::max(std::abs(prev), std::abs(vals[i]));
      if (std::abs(vals[i] - prev) <= rel_tol * scale + abs_floor) {
        out.back().push_back(i);
        continue;
      }
    }
    out.push_back({i});
  }
  return out;
}

void finalize(Spectrum& s, const AssembledForms& f, int count) {
  s.residuals.clear();
  double scale = 0;
  for (int k = 0; k <= count; ++k) {
    const Eigen::VectorXd u = s.vectors.col(k);
    const Eigen::VectorXd mu_v = f.M * u;
    const double den = mu_v.norm();
    s.residuals.push_back((f.K * u - s.values[k] * mu_v).norm() / den);
    scale = std::max(scale, std::abs(s.values[k]));
  }
  s.clusters = make_clusters(s.values, 1e-6, 1e-9 * std::max(scale, 1.0));
}

Spectrum solve_dense(const AssembledForms& f, int count) {
  Eigen::MatrixXd K = Eigen::MatrixXd(f.K);
  Eigen::MatrixXd M = Eigen::MatrixXd(f.M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  if (es.info() != Eigen::Success)
    throw SolveError("dense generalized eigensolver failed (singular mass?)");
  Spectrum s;
  for (int k = 0; k <= count; ++k) s.values.push_back(es.eigenvalues()[k]);
  s.vectors = es.eigenvectors().leftCols(count + 1);
  finalize(s, f, count);
  return s;
}

Spectrum solve_sparse(const AssembledForms& f, int count, const SolveOpts& opts) {
  const int n = f.num_dofs();
  const int block = std::min(n, count + 6);
  const double kscale = f.K.diagonal().sum() / std::max(f.M.diagonal().sum(), 1e-300);
  const double tau = 1e-8 * std::max(kscale, 1e-12);

  Eigen::SparseMatrix<double> A = f.K + tau * f.M;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(A);
  if (chol.info() != Eigen::Success)
    throw SolveError("factorization of the shifted stiffness failed");

  auto rng = make_rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X(n, block);
  X.col(0).setOnes();  // deflates the Neumann zero mode explicitly
  for (int j = 1; j < block; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);

  Eigen::VectorXd vals = Eigen::VectorXd::Zero(block);
  double best_resid = 1e300;
  int backsolves = 0;
  while (true) {
    if (backsolves > opts.max_iters)
      throw SolveError("eigensolver iteration cap hit, best residual " +
                       std::to_string(best_resid));
    X = chol.solve(f.M * X);
    backsolves += block;
    // Rayleigh-Ritz in the M-inner product
    Eigen::MatrixXd Kb = X.transpose() * (f.K * X).eval();
    Eigen::MatrixXd Mb = X.transpose() * (f.M * X).eval();
    Kb = 0.5 * (Kb + Kb.transpose()).eval();
    Mb = 0.5 * (Mb + Mb.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kb, Mb);
    if (es.info() != Eigen::Success)
      throw SolveError("Rayleigh-Ritz projection failed");
    X = (X * es.eigenvectors()).eval();
    vals = es.eigenvalues();
    double worst = 0;
    for (int k = 0; k <= count; ++k) {
      const Eigen::VectorXd u = X.col(k);
      const Eigen::VectorXd mu_v = f.M * u;
      const double r = (f.K * u - vals[k] * mu_v).norm() / mu_v.norm();
      worst = std::max(worst, r / (1.0 + std::abs(vals[k])));
    }
    best_resid = std::min(best_resid, worst);
    if (worst <= opts.tol) break;
  }

  Spectrum s;
  for (int k = 0; k <= count; ++k) s.values.push_back(vals[k]);
  s.vectors = X.leftCols(count + 1);
  finalize(s, f, count);
  return s;
}

}  // namespace

Spectrum solve_lowest(const AssembledForms& forms, int count,
                      const SolveOpts& opts) {
  if (count < 0) throw SolveError("count must be >= 0");
  if (count + 1 > forms.num_dofs())
    throw SolveError("asking for more eigenpairs than unknowns");
  if (forms.num_dofs() <= opts.dense_cutoff) return solve_dense(forms, count);
  return solve_sparse(forms, count, opts);
}

}  // namespace sw
