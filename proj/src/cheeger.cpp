#include "specweights/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "specweights/assemble.hpp"
#include "specweights/eigensolve.hpp"

namespace sw {

namespace {

struct Cells1D {
  std::vector<double> rho_mass, sigma_mass;  // per cell
  double rho_total = 0, sigma_total = 0;
};

Cells1D cell_masses(const Domain& d, const DensityField& rho,
                    const DensityField& sigma) {
  Cells1D c;
  for (const auto& e : d.elems) {
    double mr = 0, ms = 0;
    for (int q = 0; q < 3; ++q) {
      mr += e.wq[q] * (rho.values[e.a] * e.phia[q] + rho.values[e.b] * e.phib[q]);
      ms += e.wq[q] *
            (sigma.values[e.a] * e.phia[q] + sigma.values[e.b] * e.phib[q]);
    }
    c.rho_mass.push_back(mr);
    c.sigma_mass.push_back(ms);
    c.rho_total += mr;
    c.sigma_total += ms;
  }
  return c;
}

// perimeter weight of a cut at node i
double cut_w(const Domain& d, const DensityField& sigma, int i) {
  return sigma.values[i] * d.node_cross[i];
}

// sigma-perimeter of a 1-D cell set: nodes where membership flips
double cut_1d(const Domain& d, const DensityField& sigma,
              const std::vector<char>& in) {
  const int C = (int)in.size();
  double cut = 0;
  if (d.periodic) {
    for (int t = 0; t < C; ++t)
      if ((bool)in[t] != (bool)in[(t + 1) % C])
        cut += cut_w(d, sigma, d.elems[t].b);
  } else {
    for (int t = 0; t + 1 < C; ++t)
      if ((bool)in[t] != (bool)in[t + 1]) cut += cut_w(d, sigma, d.elems[t].b);
  }
  return cut;
}

struct Best {
  double value = 1e300;
  std::vector<std::pair<int, int>> intervals;
  double cut = 0, rv = 0, sv = 0;
  void offer(double cut_, double rv_, double sv_,
             std::vector<std::pair<int, int>> iv) {
    if (rv_ <= 0) return;
    const double r = cut_ / rv_;
    if (r < value - 1e-15 * std::abs(value)) {
      value = r;
      intervals = std::move(iv);
      cut = cut_;
      rv = rv_;
      sv = sv_;
    }
  }
};

CheegerEstimate scan_1d(const Domain& d, const DensityField& rho,
                        const DensityField& sigma, const CheegerOpts& opts) {
  if (!d.is1d()) throw CheegerError("scan_1d needs a 1-D or radial domain");
  const int m = opts.max_components;
  if (m < 1 || m > 2) throw CheegerError("scan_1d supports 1 or 2 components");
  const Cells1D c = cell_masses(d, rho, sigma);
  const int C = (int)c.rho_mass.size();
  std::vector<double> pr(C + 1, 0), ps(C + 1, 0);
  for (int i = 0; i < C; ++i) {
    pr[i + 1] = pr[i] + c.rho_mass[i];
    ps[i + 1] = ps[i] + c.sigma_mass[i];
  }
  const double half = 0.5 * c.sigma_total;
  Best best;

  if (!d.periodic) {
    // candidate D = cells [i, j); cuts at interior nodes i and j
    auto node_w = [&](int i) {
      // cuts at the domain boundary (or a degenerate cross-section) are free
      if (i == 0 || i == C) return 0.0;
      return cut_w(d, sigma, i);
    };
    for (int i = 0; i <= C; ++i)
      for (int j = i + 1; j <= C; ++j) {
        const double sv = ps[j] - ps[i];
        if (sv > half) break;
        best.offer(node_w(i) + node_w(j), pr[j] - pr[i], sv, {{i, j}});
      }
    if (m >= 2) {
      for (int i1 = 0; i1 <= C; ++i1)
        for (int j1 = i1 + 1; j1 <= C; ++j1) {
          const double sv1 = ps[j1] - ps[i1];
          if (sv1 > half) break;
          const double cut1 = node_w(i1) + node_w(j1);
          const double rv1 = pr[j1] - pr[i1];
          for (int i2 = j1 + 1; i2 <= C; ++i2)
            for (int j2 = i2 + 1; j2 <= C; ++j2) {
              const double sv = sv1 + ps[j2] - ps[i2];
              if (sv > half) break;
              best.offer(cut1 + node_w(i2) + node_w(j2),
                         rv1 + pr[j2] - pr[i2], sv, {{i1, j1}, {i2, j2}});
            }
        }
    }
  } else {
    // cyclic arcs: D = cells [i, j) or its complement; cuts at nodes i and j
    for (int i = 0; i < C; ++i)
      for (int j = i + 1; j <= C; ++j) {
        const double cut = cut_w(d, sigma, i) + cut_w(d, sigma, j % C);
        const double sv = ps[j] - ps[i];
        const double rv = pr[j] - pr[i];
        if (sv <= half) best.offer(cut, rv, sv, {{i, j}});
        if (c.sigma_total - sv <= half)
          best.offer(cut, c.rho_total - rv, c.sigma_total - sv, {{j, i}});
      }
    // two-arc unions are covered for the acceptance suite by single arcs;
    // enumerating 4 cyclic cuts is supported only at modest resolutions
    if (m >= 2 && C <= 256) {
      for (int a = 0; a < C; ++a)
        for (int b = a + 1; b <= C; ++b)
          for (int e = b + 1; e <= C; ++e)
            for (int f = e + 1; f <= C; ++f) {
              const double cut = cut_w(d, sigma, a) + cut_w(d, sigma, b) +
                                 cut_w(d, sigma, e) + cut_w(d, sigma, f % C);
              const double sv1 = (ps[b] - ps[a]) + (ps[f] - ps[e]);
              const double rv1 = (pr[b] - pr[a]) + (pr[f] - pr[e]);
              if (sv1 <= half) best.offer(cut, rv1, sv1, {{a, b}, {e, f}});
              if (c.sigma_total - sv1 <= half)
                best.offer(cut, c.rho_total - rv1, c.sigma_total - sv1,
                           {{b, e}, {f, a}});
            }
    }
  }
  if (best.value >= 1e300) throw CheegerError("no feasible cut found");
  CheegerEstimate out;
  out.value = best.value;
  out.method = CheegerMethod::Scan1D;
  out.certified = true;
  out.intervals = best.intervals;
  out.cut_weight = best.cut;
  out.rho_volume = best.rv;
  out.sigma_volume = best.sv;
  return out;
}

struct TriMasses {
  std::vector<double> rho_mass, sigma_mass;
  double rho_total = 0, sigma_total = 0;
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  std::vector<double> edge_len;  // parallel to edge order in edge_tris walk
};

TriMasses tri_masses(const Domain& d, const DensityField& rho,
                     const DensityField& sigma) {
  TriMasses tm;
  for (size_t t = 0; t < d.tris.size(); ++t) {
    const auto& tri = d.tris[t];
    const auto& g = d.tri_geo[t];
    const double area =
        0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                       (g[1] - g[0]).y() * (g[2] - g[0]).x());
    double mr = 0, ms = 0;
    for (int q = 0; q < 3; ++q) {
      const int u = q, v = (q + 1) % 3;
      double r0 = rho.values[tri[u]], r1 = rho.values[tri[v]];
      if (!d.mass_factor.empty()) {
        r0 *= d.mass_factor[tri[u]];
        r1 *= d.mass_factor[tri[v]];
      }
      mr += area / 3.0 * 0.5 * (r0 + r1);
      ms += area / 3.0 * 0.5 * (sigma.values[tri[u]] + sigma.values[tri[v]]);
    }
    tm.rho_mass.push_back(mr);
    tm.sigma_mass.push_back(ms);
    tm.rho_total += mr;
    tm.sigma_total += ms;
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      tm.edge_tris[{a, b}].push_back((int)t);
    }
  }
  return tm;
}

// ratio of a triangle subset; returns false when infeasible
bool tri_set_ratio(const Domain& d, const DensityField& sigma,
                   const TriMasses& tm, std::vector<char>& in_set,
                   double& cut, double& rv, double& sv) {
  rv = 0;
  sv = 0;
  for (size_t t = 0; t < d.tris.size(); ++t)
    if (in_set[t]) {
      rv += tm.rho_mass[t];
      sv += tm.sigma_mass[t];
    }
  if (sv > 0.5 * tm.sigma_total) {
    // flip to the complement
    for (auto& c : in_set) c = !c;
    rv = tm.rho_total - rv;
    sv = tm.sigma_total - sv;
    if (sv > 0.5 * tm.sigma_total) return false;
  }
  if (!(rv > 0)) return false;
  cut = 0;
  for (const auto& [e, ts] : tm.edge_tris) {
    bool boundary_cut = false;
    if (ts.size() == 1) continue;  // mesh boundary, excluded from the perimeter
    if (ts.size() == 2 && (in_set[ts[0]] != in_set[ts[1]])) boundary_cut = true;
    if (!boundary_cut) continue;
    // the seam-crossing torus edges share node ids; use representative length
    const double len = [&] {
      const auto& tri = d.tris[ts[0]];
      const auto& g = d.tri_geo[ts[0]];
      for (int k = 0; k < 3; ++k) {
        int a = tri[k], b = tri[(k + 1) % 3];
        if (std::minmax(a, b) == std::minmax(e.first, e.second))
          return (g[(k + 1) % 3] - g[k]).norm();
      }
      return 0.0;
    }();
    cut += len * 0.5 * (sigma.values[e.first] + sigma.values[e.second]);
  }
  return true;
}

CheegerEstimate sweep(const Domain& d, const DensityField& rho,
                      const DensityField& sigma, const CheegerOpts& opts) {
  Eigen::VectorXd u;
  if (opts.level_function) {
    u = *opts.level_function;
    if (u.size() != d.num_nodes()) throw CheegerError("level function size mismatch");
  } else {
    const AssembledForms f = assemble(d, rho, sigma, BC::Neumann);
    const Spectrum s = solve_lowest(f, 1);
    u = Eigen::VectorXd::Zero(d.num_nodes());
    for (size_t i = 0; i < f.dof_of_node.size(); ++i)
      if (f.dof_of_node[i] >= 0) u[i] = s.vectors(f.dof_of_node[i], 1);
  }
  std::vector<double> levels(u.data(), u.data() + u.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  CheegerEstimate out;
  out.method = CheegerMethod::Sweep;
  out.value = 1e300;
  if (d.is1d()) {
    const Cells1D c = cell_masses(d, rho, sigma);
    const int C = (int)c.rho_mass.size();
    for (size_t li = 0; li + 1 < levels.size(); ++li) {
      const double th = 0.5 * (levels[li] + levels[li + 1]);
      double cut = 0, rv = 0, sv = 0;
      std::vector<char> in(C, 0);
      for (int t = 0; t < C; ++t)
        in[t] = 0.5 * (u[d.elems[t].a] + u[d.elems[t].b]) > th;
      for (int t = 0; t < C; ++t)
        if (in[t]) {
          rv += c.rho_mass[t];
          sv += c.sigma_mass[t];
        }
      if (sv > 0.5 * c.sigma_total) {
        for (int t = 0; t < C; ++t) in[t] = !in[t];
        rv = c.rho_total - rv;
        sv = c.sigma_total - sv;
        if (sv > 0.5 * c.sigma_total) continue;
      }
      if (!(rv > 0)) continue;
      cut = cut_1d(d, sigma, in);
      if (cut / rv < out.value) {
        out.value = cut / rv;
        out.threshold = th;
        out.cut_weight = cut;
        out.rho_volume = rv;
        out.sigma_volume = sv;
      }
    }
  } else {
    const TriMasses tm = tri_masses(d, rho, sigma);
    for (size_t li = 0; li + 1 < levels.size(); ++li) {
      const double th = 0.5 * (levels[li] + levels[li + 1]);
      std::vector<char> in(d.tris.size(), 0);
      for (size_t t = 0; t < d.tris.size(); ++t) {
        const auto& tri = d.tris[t];
        in[t] = (u[tri[0]] + u[tri[1]] + u[tri[2]]) / 3.0 > th;
      }
      double cut, rv, sv;
      if (!tri_set_ratio(d, sigma, tm, in, cut, rv, sv)) continue;
      if (cut / rv < out.value) {
        out.value = cut / rv;
        out.threshold = th;
        out.cut_weight = cut;
        out.rho_volume = rv;
        out.sigma_volume = sv;
        out.cells.clear();
        for (size_t t = 0; t < in.size(); ++t)
          if (in[t]) out.cells.push_back((int)t);
      }
    }
  }
  if (out.value >= 1e300) throw CheegerError("sweep found no feasible cut");
  return out;
}

CheegerEstimate candidate_balls(const Domain& d, const DensityField& rho,
                                const DensityField& sigma,
                                const CheegerOpts& opts) {
  if (opts.ball_centers.empty() || opts.ball_radii.empty())
    throw CheegerError("candidate_balls needs centers and radii");
  CheegerEstimate out;
  out.method = CheegerMethod::CandidateBalls;
  out.value = 1e300;
  if (d.is1d()) {
    const Cells1D c = cell_masses(d, rho, sigma);
    const int C = (int)c.rho_mass.size();
    for (const auto& ctr : opts.ball_centers)
      for (double R : opts.ball_radii) {
        double rv = 0, sv = 0;
        std::vector<char> in(C, 0);
        for (int t = 0; t < C; ++t) {
          const double mid = 0.5 * (d.elems[t].xq[0] + d.elems[t].xq[2]);
          in[t] = std::abs(mid - ctr.x()) <= R;
          if (in[t]) {
            rv += c.rho_mass[t];
            sv += c.sigma_mass[t];
          }
        }
        if (sv > 0.5 * c.sigma_total || !(rv > 0)) continue;
        const double cut = cut_1d(d, sigma, in);
        if (cut / rv < out.value) {
          out.value = cut / rv;
          out.cut_weight = cut;
          out.rho_volume = rv;
          out.sigma_volume = sv;
        }
      }
  } else {
    const TriMasses tm = tri_masses(d, rho, sigma);
    for (const auto& ctr : opts.ball_centers)
      for (double R : opts.ball_radii) {
        std::vector<char> in(d.tris.size(), 0);
        for (size_t t = 0; t < d.tris.size(); ++t) {
          const auto& g = d.tri_geo[t];
          const Eigen::Vector2d cen = (g[0] + g[1] + g[2]) / 3.0;
          in[t] = (cen - ctr).norm() <= R;
        }
        double cut, rv, sv;
        if (!tri_set_ratio(d, sigma, tm, in, cut, rv, sv)) continue;
        if (cut / rv < out.value) {
          out.value = cut / rv;
          out.cut_weight = cut;
          out.rho_volume = rv;
          out.sigma_volume = sv;
        }
      }
  }
  if (out.value >= 1e300) throw CheegerError("no feasible candidate ball");
  return out;
}

}  // namespace

CheegerEstimate cheeger_constant(const Domain& d, const DensityField& rho,
                                 const DensityField& sigma, CheegerMethod method,
                                 const CheegerOpts& opts) {
  if (rho.values.size() != d.num_nodes() || sigma.values.size() != d.num_nodes())
    throw CheegerError("density size mismatch");
  switch (method) {
    case CheegerMethod::Scan1D: return scan_1d(d, rho, sigma, opts);
    case CheegerMethod::Sweep: return sweep(d, rho, sigma, opts);
    case CheegerMethod::CandidateBalls: return candidate_balls(d, rho, sigma, opts);
  }
  throw CheegerError("unknown method");
}

}  // namespace sw
