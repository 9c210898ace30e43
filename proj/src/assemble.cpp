#include "specweights/assemble.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace sw {

namespace {

void check_field(const Domain& d, const DensityField& f, const char* name) {
  if (f.values.size() != d.num_nodes())
    throw AssembleError(std::string(name) + ": size mismatch");
  if (f.values.minCoeff() <= 0)
    throw AssembleError(std::string(name) + ": values must be positive");
}

}  // namespace

AssembledForms assemble(const Domain& d, const DensityField& rho,
                        const DensityField& sigma, BC bc) {
  check_field(d, rho, "rho");
  check_field(d, sigma, "sigma");
  const int nn = d.num_nodes();

  std::vector<bool> fixed(nn, false);
  if (bc == BC::Dirichlet) {
    if (d.is1d()) {
      if (d.periodic) throw AssembleError("Dirichlet on a closed domain");
      // the center of a radial ball is an interior point, not boundary
      if (d.kind != Kind::RadialBall) fixed[0] = true;
      fixed[nn - 1] = true;
    } else {
      if (d.boundary_nodes.empty())
        throw AssembleError("Dirichlet on a closed domain");
      for (int i : d.boundary_nodes) fixed[i] = true;
    }
  }
  // tangential modes vanish where the cross-section degenerates
  if (d.is1d() && d.ell > 0) {
    for (int i = 0; i < nn; ++i)
      if (d.node_cross[i] == 0.0) fixed[i] = true;
  }

  AssembledForms f;
  f.bc = bc;
  f.ell = d.ell;
  f.dof_of_node.assign(nn, -1);
  int nd = 0;
  for (int i = 0; i < nn; ++i)
    if (!fixed[i]) f.dof_of_node[i] = nd++;
  if (nd == 0) throw AssembleError("all nodes eliminated");

  std::vector<Eigen::Triplet<double>> tk, tm;
  auto addK = [&](int i, int j, double v) {
    const int di = f.dof_of_node[i], dj = f.dof_of_node[j];
    if (di >= 0 && dj >= 0) tk.emplace_back(di, dj, v);
  };
  auto addM = [&](int i, int j, double v) {
    const int di = f.dof_of_node[i], dj = f.dof_of_node[j];
    if (di >= 0 && dj >= 0) tm.emplace_back(di, dj, v);
  };

  if (d.is1d()) {
    const double cl = (double)d.ell * (d.ell + d.n - 2);
    for (const auto& e : d.elems) {
      const int nodes[2] = {e.a, e.b};
      const double sa = sigma.values[e.a], sb = sigma.values[e.b];
      const double ra = rho.values[e.a], rb = rho.values[e.b];
      double kw = 0;
      for (int q = 0; q < 3; ++q) kw += e.wq[q] * (sa * e.phia[q] + sb * e.phib[q]);
      const double g2 = e.inv_h * e.inv_h;
      double Ke[2][2] = {{kw * g2, -kw * g2}, {-kw * g2, kw * g2}};
      double Me[2][2] = {{0, 0}, {0, 0}};
      for (int q = 0; q < 3; ++q) {
        const double rq = ra * e.phia[q] + rb * e.phib[q];
        const double sq = sa * e.phia[q] + sb * e.phib[q];
        const double phi[2] = {e.phia[q], e.phib[q]};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            Me[i][j] += e.wq[q] * rq * phi[i] * phi[j];
            if (cl > 0)
              Ke[i][j] +=
                  e.wq[q] * sq * cl / (e.shape[q] * e.shape[q]) * phi[i] * phi[j];
          }
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          addK(nodes[i], nodes[j], Ke[i][j]);
          addM(nodes[i], nodes[j], Me[i][j]);
        }
    }
  } else {
    for (size_t t = 0; t < d.tris.size(); ++t) {
      const auto& tri = d.tris[t];
      const auto& g = d.tri_geo[t];
      Eigen::Matrix2d B;
      B.col(0) = g[1] - g[0];
      B.col(1) = g[2] - g[0];
      const double det = B.determinant();
      if (det == 0) throw AssembleError("degenerate triangle");
      const double area = 0.5 * std::abs(det);
      Eigen::Matrix<double, 2, 3> ref;
      ref << -1, 1, 0, -1, 0, 1;
      const Eigen::Matrix<double, 2, 3> G = B.transpose().inverse() * ref;
      const double sbar =
          (sigma.values[tri[0]] + sigma.values[tri[1]] + sigma.values[tri[2]]) / 3.0;
      const Eigen::Matrix3d Ke = sbar * area * G.transpose() * G;
      double rf[3];
      for (int k = 0; k < 3; ++k) {
        rf[k] = rho.values[tri[k]];
        if (!d.mass_factor.empty()) rf[k] *= d.mass_factor[tri[k]];
      }
      // edge-midpoint quadrature, exact for quadratics
      Eigen::Matrix3d Me = Eigen::Matrix3d::Zero();
      for (int q = 0; q < 3; ++q) {
        const int u = q, v = (q + 1) % 3;
        const double rq = 0.5 * (rf[u] + rf[v]);
        Eigen::Vector3d phi = Eigen::Vector3d::Zero();
        phi[u] = 0.5;
        phi[v] = 0.5;
        Me += (area / 3.0) * rq * phi * phi.transpose();
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          addK(tri[i], tri[j], Ke(i, j));
          addM(tri[i], tri[j], Me(i, j));
        }
    }
  }

  f.K.resize(nd, nd);
  f.M.resize(nd, nd);
  f.K.setFromTriplets(tk.begin(), tk.end());
  f.M.setFromTriplets(tm.begin(), tm.end());
  return f;
}

Eigen::VectorXd restrict_to_dofs(const AssembledForms& f,
                                 const Eigen::VectorXd& nodal) {
  if ((int)f.dof_of_node.size() != nodal.size())
    throw AssembleError("nodal vector size mismatch");
  Eigen::VectorXd u(f.num_dofs());
  for (size_t i = 0; i < f.dof_of_node.size(); ++i)
    if (f.dof_of_node[i] >= 0) u[f.dof_of_node[i]] = nodal[i];
  return u;
}

double rayleigh_quotient(const AssembledForms& f, const Eigen::VectorXd& u) {
  if (u.size() != f.num_dofs()) throw AssembleError("trial vector size mismatch");
  const double den = u.dot(f.M * u);
  if (!(den > 0)) throw AssembleError("degenerate trial function");
  return u.dot(f.K * u) / den;
}

}  // namespace sw
