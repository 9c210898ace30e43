#include "specweights/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace sw {

namespace {

constexpr double kPi = std::numbers::pi;

// 3-point Gauss-Legendre on [-1, 1]
constexpr double kGx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

std::vector<double> merged_grid(double lo, double hi, int n_elems,
                                const std::vector<double>& breaks,
                                bool half_open) {
  if (n_elems < 4) throw DomainError("resolution must be at least 4");
  if (!(hi > lo)) throw DomainError("empty 1-D extent");
  std::vector<double> pts;
  for (int i = 0; i <= n_elems; ++i)
    pts.push_back(lo + (hi - lo) * i / n_elems);
  for (double b : breaks) {
    if (b > lo && b < hi) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  const double tol = (hi - lo) * 1e-12;
  for (double p : pts) {
    if (out.empty() || p - out.back() > tol) out.push_back(p);
  }
  if (half_open) out.pop_back();
  return out;
}

template <class WFun, class SFun>
Elem1D make_elem(int a, int b, double za, double zb, const WFun& w,
                 const SFun& s) {
  Elem1D e;
  e.a = a;
  e.b = b;
  const double h = zb - za;
  if (!(h > 0)) throw DomainError("non-monotone 1-D grid");
  e.inv_h = 1.0 / h;
  for (int q = 0; q < 3; ++q) {
    const double x = za + (kGx[q] + 1.0) * 0.5 * h;
    e.xq[q] = x;
    e.wq[q] = kGw[q] * 0.5 * h * w(x);
    e.shape[q] = s(x);
    e.phib[q] = (x - za) * e.inv_h;
    e.phia[q] = 1.0 - e.phib[q];
  }
  return e;
}

int torus_idx(int i, int j, int N) { return ((i % N + N) % N) + N * ((j % N + N) % N); }

void finalize_volume(Domain& d) {
  double v = 0;
  if (d.is1d()) {
    for (const auto& e : d.elems)
      for (int q = 0; q < 3; ++q) v += e.wq[q];
  } else {
    for (size_t t = 0; t < d.tris.size(); ++t) {
      const auto& g = d.tri_geo[t];
      const double area =
          0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                         (g[1] - g[0]).y() * (g[2] - g[0]).x());
      v += area;
    }
  }
  d.volume = v;
}

void detect_boundary(Domain& d) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : d.tris) {
    for (int k = 0; k < 3; ++k) {
      int u = t[k], v = t[(k + 1) % 3];
      if (u > v) std::swap(u, v);
      edge_count[{u, v}]++;
    }
  }
  std::vector<bool> on_bnd(d.nodes2d.size(), false);
  for (const auto& [e, c] : edge_count) {
    if (c == 1) {
      on_bnd[e.first] = true;
      on_bnd[e.second] = true;
    }
  }
  d.boundary_nodes.clear();
  for (size_t i = 0; i < on_bnd.size(); ++i)
    if (on_bnd[i]) d.boundary_nodes.push_back((int)i);
}

}  // namespace

double unit_ball_volume(int n) {
  return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

std::vector<double> Domain::lumped_weights() const {
  std::vector<double> w(num_nodes(), 0.0);
  if (is1d()) {
    for (const auto& e : elems) {
      for (int q = 0; q < 3; ++q) {
        w[e.a] += e.wq[q] * e.phia[q];
        w[e.b] += e.wq[q] * e.phib[q];
      }
    }
  } else {
    for (size_t t = 0; t < tris.size(); ++t) {
      const auto& g = tri_geo[t];
      const double area =
          0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                         (g[1] - g[0]).y() * (g[2] - g[0]).x());
      for (int k = 0; k < 3; ++k) {
        double fk = 1.0;
        if (!mass_factor.empty()) {
          // edge-midpoint rule restricted to hat k
          const double f0 = mass_factor[tris[t][k]];
          const double f1 = mass_factor[tris[t][(k + 1) % 3]];
          const double f2 = mass_factor[tris[t][(k + 2) % 3]];
          fk = 0.5 * (0.5 * (f0 + f1) + 0.5 * (f0 + f2));
        }
        w[tris[t][k]] += area / 3.0 * fk;
      }
    }
  }
  return w;
}

Domain build_domain(const DomainSpec& spec) {
  Domain d;
  d.kind = spec.kind;
  d.n = spec.n;
  d.ell = spec.ell;
  const auto unit_w = [](double) { return 1.0; };
  const auto unit_s = [](double) { return 1.0; };

  switch (spec.kind) {
    case Kind::Interval: {
      d.n = 1;
      d.ell = 0;
      d.x = merged_grid(0.0, spec.length, spec.N, spec.breaks, false);
      for (size_t i = 0; i + 1 < d.x.size(); ++i)
        d.elems.push_back(
            make_elem((int)i, (int)i + 1, d.x[i], d.x[i + 1], unit_w, unit_s));
      d.node_cross.assign(d.x.size(), 1.0);
      break;
    }
    case Kind::Circle: {
      d.n = 1;
      d.ell = 0;
      d.periodic = true;
      d.x = merged_grid(0.0, spec.length, spec.N, spec.breaks, true);
      const int m = (int)d.x.size();
      for (int i = 0; i + 1 < m; ++i)
        d.elems.push_back(
            make_elem(i, i + 1, d.x[i], d.x[i + 1], unit_w, unit_s));
      d.elems.push_back(
          make_elem(m - 1, 0, d.x[m - 1], spec.length, unit_w, unit_s));
      d.node_cross.assign(d.x.size(), 1.0);
      break;
    }
    case Kind::RadialBall: {
      if (spec.n < 2) throw DomainError("radial model needs dimension >= 2");
      if (!(spec.radius > 0)) throw DomainError("radius must be positive");
      const double S = unit_sphere_area(spec.n);
      const int n = spec.n;
      auto w = [S, n](double r) { return S * std::pow(r, n - 1); };
      auto s = [](double r) { return r; };
      d.x = merged_grid(0.0, spec.radius, spec.N, spec.breaks, false);
      for (size_t i = 0; i + 1 < d.x.size(); ++i)
        d.elems.push_back(make_elem((int)i, (int)i + 1, d.x[i], d.x[i + 1], w, s));
      for (double r : d.x) d.node_cross.push_back(w(r));
      break;
    }
    case Kind::WarpedProduct: {
      if (spec.n < 2) throw DomainError("warped product needs dimension >= 2");
      if (!spec.profile) throw DomainError("warped product needs a profile");
      const double S = unit_sphere_area(spec.n);
      const int n = spec.n;
      auto gamma = spec.profile;
      auto w = [S, n, gamma](double t) {
        const double g = gamma(t);
        if (g < 0) throw DomainError("profile must be nonnegative");
        return S * std::pow(g, n - 1);
      };
      d.x = merged_grid(0.0, spec.length, spec.N, spec.breaks, false);
      for (size_t i = 0; i + 1 < d.x.size(); ++i)
        d.elems.push_back(
            make_elem((int)i, (int)i + 1, d.x[i], d.x[i + 1], w, gamma));
      for (double t : d.x) d.node_cross.push_back(w(t));
      if (spec.ell > 0) {
        for (const auto& e : d.elems)
          for (int q = 0; q < 3; ++q)
            if (!(e.shape[q] > 0))
              throw DomainError("profile must be positive for ell > 0");
      }
      break;
    }
    case Kind::Disc: {
      if (!spec.off_path.empty()) return load_off(spec.off_path);
      d.n = 2;
      const double R = spec.radius;
      if (!(R > 0)) throw DomainError("radius must be positive");
      int rings = spec.rings > 0 ? spec.rings : spec.N;
      int sectors = spec.sectors > 0 ? spec.sectors : 2 * rings;
      if (rings < 2 || sectors < 4) throw DomainError("disc mesh too coarse");
      std::vector<double> radii;
      for (int i = 1; i <= rings; ++i) {
        if (spec.grade_t > 0) {
          const double t = spec.grade_t;
          const double ang = (double)i / rings * std::atan(t * R);
          radii.push_back(std::tan(ang) / t);
        } else {
          radii.push_back(R * i / rings);
        }
      }
      for (double b : spec.breaks)
        if (b > 0 && b < R) radii.push_back(b);
      std::sort(radii.begin(), radii.end());
      std::vector<double> rr;
      for (double r : radii)
        if (rr.empty() || r - rr.back() > R * 1e-9) rr.push_back(r);
      if (std::abs(rr.back() - R) > R * 1e-9) rr.push_back(R);
      rings = (int)rr.size();
      d.nodes2d.push_back(Eigen::Vector2d::Zero());
      for (int i = 0; i < rings; ++i)
        for (int j = 0; j < sectors; ++j) {
          const double th = 2 * kPi * j / sectors;
          d.nodes2d.push_back(rr[i] * Eigen::Vector2d(std::cos(th), std::sin(th)));
        }
      auto idx = [sectors](int ring, int j) {
        return 1 + (ring - 1) * sectors + ((j % sectors + sectors) % sectors);
      };
      for (int j = 0; j < sectors; ++j)
        d.tris.push_back({0, idx(1, j), idx(1, j + 1)});
      for (int i = 2; i <= rings; ++i)
        for (int j = 0; j < sectors; ++j) {
          const int a = idx(i - 1, j), b = idx(i - 1, j + 1);
          const int c = idx(i, j), e = idx(i, j + 1);
          d.tris.push_back({a, c, e});
          d.tris.push_back({a, e, b});
        }
      for (const auto& t : d.tris)
        d.tri_geo.push_back({d.nodes2d[t[0]], d.nodes2d[t[1]], d.nodes2d[t[2]]});
      for (int j = 0; j < sectors; ++j) d.boundary_nodes.push_back(idx(rings, j));
      break;
    }
    case Kind::FlatTorus: {
      d.n = 2;
      d.periodic = true;
      const int N = spec.N;
      if (N < 4) throw DomainError("torus grid too coarse");
      const double L = spec.length;
      const double h = L / N;
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
          d.nodes2d.push_back(Eigen::Vector2d(i * h, j * h));
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
          const Eigen::Vector2d p00(i * h, j * h), p10((i + 1) * h, j * h);
          const Eigen::Vector2d p01(i * h, (j + 1) * h), p11((i + 1) * h, (j + 1) * h);
          const int c00 = torus_idx(i, j, N), c10 = torus_idx(i + 1, j, N);
          const int c01 = torus_idx(i, j + 1, N), c11 = torus_idx(i + 1, j + 1, N);
          d.tris.push_back({c00, c10, c11});
          d.tri_geo.push_back({p00, p10, p11});
          d.tris.push_back({c00, c11, c01});
          d.tri_geo.push_back({p00, p11, p01});
        }
      break;
    }
  }
  finalize_volume(d);
  return d;
}

Domain load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open OFF file: " + path);
  std::string tok;
  in >> tok;
  if (tok != "OFF") throw DomainError("not an ASCII OFF file: " + path);
  int nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  if (nv <= 0 || nf <= 0) throw DomainError("empty OFF mesh");
  std::vector<Eigen::Vector3d> verts(nv);
  for (int i = 0; i < nv; ++i) in >> verts[i].x() >> verts[i].y() >> verts[i].z();
  Domain d;
  d.kind = Kind::Disc;
  d.n = 2;
  for (const auto& v : verts) d.nodes2d.push_back(v.head<2>());
  for (int f = 0; f < nf; ++f) {
    int cnt;
    in >> cnt;
    if (cnt != 3) throw DomainError("only triangular OFF faces are supported");
    std::array<int, 3> t;
    in >> t[0] >> t[1] >> t[2];
    for (int k : t)
      if (k < 0 || k >= nv) throw DomainError("OFF face index out of range");
    d.tris.push_back(t);
    // intrinsic flattening to a local orthonormal frame
    const Eigen::Vector3d u = verts[t[1]] - verts[t[0]];
    const Eigen::Vector3d v = verts[t[2]] - verts[t[0]];
    const double ul = u.norm();
    if (!(ul > 0)) throw DomainError("degenerate OFF triangle");
    const Eigen::Vector3d e1 = u / ul;
    Eigen::Vector3d e2 = v - v.dot(e1) * e1;
    const double e2l = e2.norm();
    if (!(e2l > 0)) throw DomainError("degenerate OFF triangle");
    e2 /= e2l;
    d.tri_geo.push_back({Eigen::Vector2d(0, 0), Eigen::Vector2d(ul, 0),
                         Eigen::Vector2d(v.dot(e1), v.dot(e2))});
  }
  if (!in) throw DomainError("truncated OFF file: " + path);
  detect_boundary(d);
  finalize_volume(d);
  return d;
}

Domain conformal_rescale_2d(const Domain& d, const Eigen::VectorXd& factor) {
  if (d.is1d()) throw DomainError("conformal rescale needs a 2-D domain");
  if (factor.size() != d.num_nodes())
    throw DomainError("conformal factor size mismatch");
  if (factor.minCoeff() <= 0) throw DomainError("conformal factor must be positive");
  Domain out = d;
  if (out.mass_factor.empty()) out.mass_factor.assign(d.num_nodes(), 1.0);
  for (int i = 0; i < d.num_nodes(); ++i) out.mass_factor[i] *= factor[i];
  double v = 0;
  for (size_t t = 0; t < out.tris.size(); ++t) {
    const auto& g = out.tri_geo[t];
    const double area =
        0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                       (g[1] - g[0]).y() * (g[2] - g[0]).x());
    const double f0 = out.mass_factor[out.tris[t][0]];
    const double f1 = out.mass_factor[out.tris[t][1]];
    const double f2 = out.mass_factor[out.tris[t][2]];
    v += area / 3.0 * 0.5 * ((f0 + f1) + (f1 + f2) + (f2 + f0));
  }
  out.volume = v;
  return out;
}

}  // namespace sw
