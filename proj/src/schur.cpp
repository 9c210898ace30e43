#include "specweights/schur.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <queue>

#include "specweights/assemble.hpp"

namespace sw {

namespace {

std::vector<std::vector<int>> cell_nodes(const Domain& d) {
  std::vector<std::vector<int>> out;
  if (d.is1d()) {
    for (const auto& e : d.elems) out.push_back({e.a, e.b});
  } else {
    for (const auto& t : d.tris) out.push_back({t[0], t[1], t[2]});
  }
  return out;
}

}  // namespace

Partition make_partition(const Domain& d,
                         const std::function<bool(double, double)>& inside) {
  const auto cells = cell_nodes(d);
  auto node_xy = [&](int i) -> Eigen::Vector2d {
    if (d.is1d()) return {d.x[i], 0.0};
    return d.nodes2d[i];
  };
  Partition p;
  p.cell_inner.assign(cells.size(), false);
  std::vector<char> node_in_inner(d.num_nodes(), 0), node_in_outer(d.num_nodes(), 0);
  for (size_t c = 0; c < cells.size(); ++c) {
    bool inner = true;
    for (int i : cells[c]) {
      const auto xy = node_xy(i);
      if (!inside(xy.x(), xy.y())) inner = false;
    }
    p.cell_inner[c] = inner;
    for (int i : cells[c]) (inner ? node_in_inner : node_in_outer)[i] = 1;
  }
  for (int i = 0; i < d.num_nodes(); ++i) {
    if (node_in_inner[i]) {
      p.inner_nodes.push_back(i);
      if (node_in_outer[i]) p.interface_nodes.push_back(i);
    } else {
      p.exterior_nodes.push_back(i);
    }
  }
  if (p.inner_nodes.empty()) throw SchurError("empty inner region");
  // connectivity of M0 through inner cells
  std::vector<std::vector<int>> node_cells(d.num_nodes());
  for (size_t c = 0; c < cells.size(); ++c)
    if (p.cell_inner[c])
      for (int i : cells[c]) node_cells[i].push_back((int)c);
  std::vector<char> seen(d.num_nodes(), 0);
  std::queue<int> bfs;
  bfs.push(p.inner_nodes[0]);
  seen[p.inner_nodes[0]] = 1;
  while (!bfs.empty()) {
    const int i = bfs.front();
    bfs.pop();
    for (int c : node_cells[i])
      for (int j : cells[c])
        if (!seen[j]) {
          seen[j] = 1;
          bfs.push(j);
        }
  }
  for (int i : p.inner_nodes)
    if (!seen[i]) throw SchurError("inner region is disconnected");
  return p;
}

Spectrum gamma_spectrum(const Domain& d, const Partition& part,
                        const DensityField& rho, int count,
                        const SolveOpts& opts) {
  (void)opts;
  const DensityField one = constant_density(d, 1.0);
  const AssembledForms full = assemble(d, one, one, BC::Neumann);
  if (full.num_dofs() != d.num_nodes())
    throw SchurError("gamma spectrum needs the unreduced stiffness");

  const int nk = (int)part.inner_nodes.size();
  const int ne = (int)part.exterior_nodes.size();
  std::vector<int> pos(d.num_nodes(), -1);
  for (int k = 0; k < nk; ++k) pos[part.inner_nodes[k]] = k;
  std::vector<int> epos(d.num_nodes(), -1);
  for (int k = 0; k < ne; ++k) epos[part.exterior_nodes[k]] = k;

  Eigen::MatrixXd Kkk = Eigen::MatrixXd::Zero(nk, nk);
  Eigen::MatrixXd Kek = Eigen::MatrixXd::Zero(ne, nk);
  std::vector<Eigen::Triplet<double>> tee;
  for (int c = 0; c < full.K.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(full.K, c); it; ++it) {
      const int i = (int)it.row(), j = (int)it.col();
      if (pos[i] >= 0 && pos[j] >= 0)
        Kkk(pos[i], pos[j]) += it.value();
      else if (epos[i] >= 0 && pos[j] >= 0)
        Kek(epos[i], pos[j]) += it.value();
      else if (epos[i] >= 0 && epos[j] >= 0)
        tee.emplace_back(epos[i], epos[j], it.value());
    }
  Eigen::MatrixXd S = Kkk;
  if (ne > 0) {
    Eigen::SparseMatrix<double> Kee(ne, ne);
    Kee.setFromTriplets(tee.begin(), tee.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(Kee);
    if (chol.info() != Eigen::Success)
      throw SchurError("exterior stiffness block is singular");
    const Eigen::MatrixXd X = chol.solve(Kek);
    S -= Kek.transpose() * X;
  }
  S = 0.5 * (S + S.transpose()).eval();

  // rho-mass supported on the inner cells
  if (rho.values.size() != d.num_nodes()) throw SchurError("rho size mismatch");
  Eigen::MatrixXd M0 = Eigen::MatrixXd::Zero(nk, nk);
  if (d.is1d()) {
    for (size_t c = 0; c < d.elems.size(); ++c) {
      if (!part.cell_inner[c]) continue;
      const auto& e = d.elems[c];
      const int loc[2] = {pos[e.a], pos[e.b]};
      for (int q = 0; q < 3; ++q) {
        const double rq = rho.values[e.a] * e.phia[q] + rho.values[e.b] * e.phib[q];
        const double phi[2] = {e.phia[q], e.phib[q]};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            M0(loc[i], loc[j]) += e.wq[q] * rq * phi[i] * phi[j];
      }
    }
  } else {
    for (size_t c = 0; c < d.tris.size(); ++c) {
      if (!part.cell_inner[c]) continue;
      const auto& tri = d.tris[c];
      const auto& g = d.tri_geo[c];
      const double area =
          0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                         (g[1] - g[0]).y() * (g[2] - g[0]).x());
      for (int q = 0; q < 3; ++q) {
        const int u = q, v = (q + 1) % 3;
        double r0 = rho.values[tri[u]], r1 = rho.values[tri[v]];
        if (!d.mass_factor.empty()) {
          r0 *= d.mass_factor[tri[u]];
          r1 *= d.mass_factor[tri[v]];
        }
        const double rq = 0.5 * (r0 + r1);
        Eigen::Vector3d phi = Eigen::Vector3d::Zero();
        phi[u] = 0.5;
        phi[v] = 0.5;
        const Eigen::Matrix3d blk = (area / 3.0) * rq * phi * phi.transpose();
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            M0(pos[tri[i]], pos[tri[j]]) += blk(i, j);
      }
    }
  }

  if (count + 1 > nk) throw SchurError("not enough inner unknowns");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, M0);
  if (es.info() != Eigen::Success)
    throw SchurError("Schur eigenproblem failed (singular inner mass?)");
  Spectrum s;
  for (int k = 0; k <= count; ++k) s.values.push_back(es.eigenvalues()[k]);
  s.vectors = es.eigenvectors().leftCols(count + 1);
  for (int k = 0; k <= count; ++k) {
    const Eigen::VectorXd u = s.vectors.col(k);
    const Eigen::VectorXd mu_v = M0 * u;
    s.residuals.push_back((S * u - s.values[k] * mu_v).norm() / mu_v.norm());
  }
  s.clusters.clear();
  for (int k = 0; k <= count; ++k) s.clusters.push_back({k});
  return s;
}

namespace {

// Full-size consistent mass over a subset of cells, with nodal density values.
Eigen::SparseMatrix<double> partial_mass(const Domain& d,
                                         const Eigen::VectorXd& values,
                                         const std::vector<bool>& cell_mask,
                                         bool on_masked) {
  std::vector<Eigen::Triplet<double>> tm;
  if (d.is1d()) {
    for (size_t c = 0; c < d.elems.size(); ++c) {
      if (cell_mask[c] != on_masked) continue;
      const auto& e = d.elems[c];
      const int nodes[2] = {e.a, e.b};
      for (int q = 0; q < 3; ++q) {
        const double rq = values[e.a] * e.phia[q] + values[e.b] * e.phib[q];
        const double phi[2] = {e.phia[q], e.phib[q]};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            tm.emplace_back(nodes[i], nodes[j], e.wq[q] * rq * phi[i] * phi[j]);
      }
    }
  } else {
    for (size_t c = 0; c < d.tris.size(); ++c) {
      if (cell_mask[c] != on_masked) continue;
      const auto& tri = d.tris[c];
      const auto& g = d.tri_geo[c];
      const double area =
          0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                         (g[1] - g[0]).y() * (g[2] - g[0]).x());
      for (int q = 0; q < 3; ++q) {
        const int u = q, v2 = (q + 1) % 3;
        double r0 = values[tri[u]], r1 = values[tri[v2]];
        if (!d.mass_factor.empty()) {
          r0 *= d.mass_factor[tri[u]];
          r1 *= d.mass_factor[tri[v2]];
        }
        const double rq = 0.5 * (r0 + r1);
        const int loc[2] = {tri[u], tri[v2]};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            tm.emplace_back(loc[i], loc[j], (area / 3.0) * rq * 0.25);
      }
    }
  }
  Eigen::SparseMatrix<double> M(d.num_nodes(), d.num_nodes());
  M.setFromTriplets(tm.begin(), tm.end());
  return M;
}

}  // namespace

std::vector<ZerorhoRow> zerorho_convergence(
    const Domain& d, const Partition& part, const DensityField& rho,
    const std::vector<double>& eps_list, int count, const SolveOpts& opts) {
  for (size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw SchurError("eps list must be decreasing");
  const Spectrum gs = gamma_spectrum(d, part, rho, count, opts);
  const DensityField one = constant_density(d, 1.0);
  AssembledForms f = assemble(d, one, one, BC::Neumann);
  // the density step sits exactly on the interface: rho over the inner cells,
  // eps over the exterior cells
  const Eigen::SparseMatrix<double> Mi =
      partial_mass(d, rho.values, part.cell_inner, true);
  const Eigen::SparseMatrix<double> Me = partial_mass(
      d, Eigen::VectorXd::Ones(d.num_nodes()), part.cell_inner, false);

  std::vector<ZerorhoRow> rows;
  for (double eps : eps_list) {
    if (!(eps > 0)) throw SchurError("eps must be positive");
    f.M = Mi + eps * Me;
    const Spectrum s = solve_lowest(f, count, opts);
    ZerorhoRow row;
    row.eps = eps;
    double err = 0;
    for (int k = 1; k <= count; ++k) {
      row.mu.push_back(s.values[k]);
      row.gamma.push_back(gs.values[k]);
      err = std::max(err, std::abs(s.values[k] - gs.values[k]) / gs.values[k]);
    }
    row.rel_error = err;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sw
