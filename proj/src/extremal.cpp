#include "specweights/extremal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "specweights/assemble.hpp"

namespace sw {

namespace {

// d/drho_i of u^T M(rho) w, accumulated over all nodes
Eigen::VectorXd mass_derivative(const Domain& d, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& w) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d.num_nodes());
  if (d.is1d()) {
    for (const auto& e : d.elems)
      for (int q = 0; q < 3; ++q) {
        const double uq = u[e.a] * e.phia[q] + u[e.b] * e.phib[q];
        const double wq2 = w[e.a] * e.phia[q] + w[e.b] * e.phib[q];
        g[e.a] += e.wq[q] * e.phia[q] * uq * wq2;
        g[e.b] += e.wq[q] * e.phib[q] * uq * wq2;
      }
  } else {
    for (size_t t = 0; t < d.tris.size(); ++t) {
      const auto& tri = d.tris[t];
      const auto& g2 = d.tri_geo[t];
      const double area =
          0.5 * std::abs((g2[1] - g2[0]).x() * (g2[2] - g2[0]).y() -
                         (g2[1] - g2[0]).y() * (g2[2] - g2[0]).x());
      for (int q = 0; q < 3; ++q) {
        const int a = tri[q], b = tri[(q + 1) % 3];
        const double uq = 0.5 * (u[a] + u[b]);
        const double wq2 = 0.5 * (w[a] + w[b]);
        double fa = 1, fb = 1;
        if (!d.mass_factor.empty()) {
          fa = d.mass_factor[a];
          fb = d.mass_factor[b];
        }
        g[a] += area / 3.0 * 0.5 * fa * uq * wq2;
        g[b] += area / 3.0 * 0.5 * fb * uq * wq2;
      }
    }
  }
  return g;
}

Eigen::VectorXd mass_derivative(const Domain& d, const Eigen::VectorXd& u) {
  return mass_derivative(d, u, u);
}

// d/dsigma_i of u^T K(sigma) w
Eigen::VectorXd stiffness_derivative(const Domain& d, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& w) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d.num_nodes());
  if (d.is1d()) {
    const double cl = (double)d.ell * (d.ell + d.n - 2);
    for (const auto& e : d.elems) {
      const double du2 =
          (u[e.b] - u[e.a]) * (w[e.b] - w[e.a]) * e.inv_h * e.inv_h;
      for (int q = 0; q < 3; ++q) {
        double extra = 0;
        if (cl > 0) {
          const double uq = u[e.a] * e.phia[q] + u[e.b] * e.phib[q];
          const double wq2 = w[e.a] * e.phia[q] + w[e.b] * e.phib[q];
          extra = cl / (e.shape[q] * e.shape[q]) * uq * wq2;
        }
        g[e.a] += e.wq[q] * e.phia[q] * (du2 + extra);
        g[e.b] += e.wq[q] * e.phib[q] * (du2 + extra);
      }
    }
  } else {
    for (size_t t = 0; t < d.tris.size(); ++t) {
      const auto& tri = d.tris[t];
      const auto& g2 = d.tri_geo[t];
      Eigen::Matrix2d B;
      B.col(0) = g2[1] - g2[0];
      B.col(1) = g2[2] - g2[0];
      const double area = 0.5 * std::abs(B.determinant());
      Eigen::Matrix<double, 2, 3> ref;
      ref << -1, 1, 0, -1, 0, 1;
      const Eigen::Matrix<double, 2, 3> G = B.transpose().inverse() * ref;
      const Eigen::Vector2d gu =
          G * Eigen::Vector3d(u[tri[0]], u[tri[1]], u[tri[2]]);
      const Eigen::Vector2d gw =
          G * Eigen::Vector3d(w[tri[0]], w[tri[1]], w[tri[2]]);
      const double e = area * gu.dot(gw) / 3.0;
      for (int k = 0; k < 3; ++k) g[tri[k]] += e;
    }
  }
  return g;
}

Eigen::VectorXd stiffness_derivative(const Domain& d, const Eigen::VectorXd& u) {
  return stiffness_derivative(d, u, u);
}

// shift-and-clip projection onto {weighted mean = 1, v >= floor}
Eigen::VectorXd project_feasible(const Eigen::VectorXd& v,
                                 const std::vector<double>& lump, double volume,
                                 double floor) {
  auto mean_at = [&](double c) {
    double s = 0;
    for (int i = 0; i < v.size(); ++i)
      s += std::max(v[i] + c, floor) * lump[i];
    return s / volume;
  };
  double lo = -v.maxCoeff() - 1, hi = std::abs(1 - v.minCoeff()) + 2;
  if (mean_at(lo) > 1) lo = -(v.maxCoeff() + 2);  // floor-dominated, widen
  for (int it = 0; it < 200; ++it) {
    const double c = 0.5 * (lo + hi);
    (mean_at(c) < 1 ? lo : hi) = c;
  }
  const double c = 0.5 * (lo + hi);
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < v.size(); ++i) out[i] = std::max(v[i] + c, floor);
  return out;
}

}  // namespace

OptimizationResult maximize_mu1(const Domain& d, Target target,
                                const OptimizeOpts& opts) {
  const auto lump = d.lumped_weights();
  const double vol = d.volume;
  const DensityField one = constant_density(d, 1.0);

  auto solve_field = [&](const Eigen::VectorXd& v, int count) {
    const DensityField fld = nodal_density(d, v);
    const AssembledForms f = target == Target::Rho
                                 ? assemble(d, fld, one, BC::Neumann)
                                 : assemble(d, one, fld, BC::Neumann);
    SolveOpts so = opts.solver;
    so.seed = opts.seed;
    return std::make_pair(solve_lowest(f, count, so), f);
  };

  Eigen::VectorXd v = Eigen::VectorXd::Ones(d.num_nodes());
  v = project_feasible(v, lump, vol, opts.floor);

  const int count = 5;
  auto [spec, forms] = solve_field(v, count);
  double value = spec.values[1];

  OptimizationResult res;
  res.history.push_back({value, 0.0, 1});
  double step = opts.step0;
  bool converged = false;
  int restarts_left = opts.restarts;
  double best_value = value;
  Eigen::VectorXd best_v = v;
  std::mt19937_64 rng(opts.seed + 17);

  for (int it = 0; it < opts.max_iters; ++it) {
    // cluster of mu_1 under the optimizer's (coarser) tolerance
    std::vector<int> cluster = {1};
    for (int j = 2; j <= count; ++j) {
      if (spec.values[j] - spec.values[1] <=
          opts.cluster_tol * std::max(std::abs(spec.values[1]), 1e-12))
        cluster.push_back(j);
      else
        break;
    }
    std::vector<Eigen::VectorXd> uu;
    std::vector<Eigen::VectorXd> grads;
    for (int j : cluster) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(d.num_nodes());
      for (size_t i = 0; i < forms.dof_of_node.size(); ++i)
        if (forms.dof_of_node[i] >= 0) u[i] = spec.vectors(forms.dof_of_node[i], j);
      const double umu = u.dot(forms.M * u);
      u /= std::sqrt(umu);
      uu.push_back(u);
      if (target == Target::Rho)
        grads.push_back(-spec.values[j] * mass_derivative(d, u));
      else
        grads.push_back(stiffness_derivative(d, u));
    }
    auto bilinear = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
      if (target == Target::Rho)
        return Eigen::VectorXd(-spec.values[1] * mass_derivative(d, u, w));
      return stiffness_derivative(d, u, w);
    };
    auto lumpdiv = [&](const Eigen::VectorXd& g) {
      Eigen::VectorXd dir(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i) dir[i] = g[i] / lump[i];
      return dir;
    };
    auto finalize_dir = [&](Eigen::VectorXd dir) -> Eigen::VectorXd {
      double dmean = 0;
      for (int i = 0; i < d.num_nodes(); ++i) dmean += dir[i] * lump[i];
      dir.array() -= dmean / vol;
      const double dnorm = dir.cwiseAbs().maxCoeff();
      if (dnorm > 0) dir /= dnorm;
      return dir;
    };

    // candidate ascent directions
    std::vector<Eigen::VectorXd> dirs;
    const int m = (int)cluster.size();
    if (m > 1) {
      // degenerate cluster: raise the trace of the m x m derivative block
      // while suppressing the splitting terms, so all members move up together
      Eigen::VectorXd trace = grads[0];
      for (int a = 1; a < m; ++a) trace += grads[a];
      std::vector<Eigen::VectorXd> cons;
      for (int a = 1; a < m; ++a) cons.push_back(grads[a] - grads[0]);
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) cons.push_back(bilinear(uu[a], uu[b]));
      Eigen::VectorXd lv(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i) lv[i] = lump[i];
      cons.push_back(lv);
      const int nc = (int)cons.size();
      const Eigen::VectorXd e0 = lumpdiv(trace);
      Eigen::MatrixXd A(nc, nc);
      Eigen::VectorXd rhs(nc);
      std::vector<Eigen::VectorXd> basis;
      for (const auto& c : cons) basis.push_back(lumpdiv(c));
      for (int a = 0; a < nc; ++a) {
        rhs[a] = cons[a].dot(e0);
        for (int b = 0; b < nc; ++b) A(a, b) = cons[a].dot(basis[b]);
      }
      const Eigen::VectorXd alpha = A.colPivHouseholderQr().solve(rhs);
      Eigen::VectorXd dir = e0;
      for (int a = 0; a < nc; ++a) dir -= alpha[a] * basis[a];
      dirs.push_back(finalize_dir(dir));
    }
    if (cluster.size() > 1) {
      Eigen::VectorXd avg = grads[0];
      for (size_t j = 1; j < grads.size(); ++j) avg += grads[j];
      dirs.push_back(finalize_dir(lumpdiv(avg / (double)grads.size())));
    }
    for (const auto& g : grads) dirs.push_back(finalize_dir(lumpdiv(g)));

    bool accepted = false;
    for (const auto& dir : dirs) {
      if (!(dir.cwiseAbs().maxCoeff() > 0)) continue;

      double trial = std::max(step, 1.0);
      while (trial >= opts.step_min) {
        const Eigen::VectorXd cand =
            project_feasible(v + trial * dir, lump, vol, opts.floor);
        auto [cs, cf] = solve_field(cand, count);
        if (cs.values[1] > value) {
          v = cand;
          spec = cs;
          forms = cf;
          const double gain = (cs.values[1] - value) / std::max(value, 1e-12);
          value = cs.values[1];
          res.history.push_back({value, trial, (int)cluster.size()});
          step = 2 * trial;  // uncapped: peaked maximizers need large amplitudes
          accepted = true;
          if (gain < opts.tol) converged = true;
          break;
        }
        trial *= 0.5;
      }
      if (accepted) break;
    }
    if (converged) break;  // relative gain fell below tol
    if (!accepted) {
      // stalled below convergence: kick with seeded multiplicative noise and
      // keep ascending; the best field seen so far is retained regardless
      if (restarts_left == 0) break;
      --restarts_left;
      if (value > best_value) {
        best_value = value;
        best_v = v;
      }
      std::normal_distribution<double> noise(0.0, 1.0);
      Eigen::VectorXd w(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i) w[i] = noise(rng);
      // a few averaging passes keep the kick spatially smooth
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd sm = w;
        if (d.is1d()) {
          for (const auto& e : d.elems) {
            sm[e.a] += 0.5 * w[e.b];
            sm[e.b] += 0.5 * w[e.a];
          }
        } else {
          for (const auto& t : d.tris)
            for (int k = 0; k < 3; ++k) sm[t[k]] += 0.5 * w[t[(k + 1) % 3]];
        }
        w = sm / sm.cwiseAbs().maxCoeff();
      }
      v = project_feasible(
          v.cwiseProduct((1.0 + 0.3 * w.array()).cwiseMax(0.1).matrix()), lump,
          vol, opts.floor);
      auto [ps, pf] = solve_field(v, count);
      spec = ps;
      forms = pf;
      value = spec.values[1];
      step = opts.step0;
    }
  }

  if (value > best_value) {
    best_value = value;
    best_v = v;
  }
  // re-solve the returned field so the reported value is a reproducible bound
  auto [fs, ff] = solve_field(best_v, 1);
  res.best_field = nodal_density(d, best_v);
  res.best_value = fs.values[1];
  res.converged = converged;
  return res;
}

}  // namespace sw
