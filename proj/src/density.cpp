#include "specweights/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sw {

namespace {

constexpr double kPi = std::numbers::pi;

double radial_coord(const Domain& d, int i, const Eigen::Vector2d& center) {
  if (d.is1d()) return d.x[i];
  if (d.kind == Kind::FlatTorus) {
    // wrapped distance on the fundamental square
    double L = 0;
    for (const auto& p : d.nodes2d) L = std::max(L, p.x());
    // nodes cover [0, L'] with spacing h; period = max + h
    // recover the period from the node lattice
    const double h = d.nodes2d[1].x() - d.nodes2d[0].x();
    const double period = L + h;
    Eigen::Vector2d dv = d.nodes2d[i] - center;
    for (int c = 0; c < 2; ++c) {
      double v = std::fmod(std::abs(dv[c]), period);
      dv[c] = std::min(v, period - v);
    }
    return dv.norm();
  }
  return (d.nodes2d[i] - center).norm();
}

double torus_period(const Domain& d) {
  const double h = d.nodes2d[1].x() - d.nodes2d[0].x();
  double L = 0;
  for (const auto& p : d.nodes2d) L = std::max(L, p.x());
  return L + h;
}

void check_eps(double eps) {
  if (!(eps > 0 && eps < 0.5))
    throw DensityError("eps must lie in (0, 1/2)");
}

Eigen::VectorXd radial_values(const Domain& d,
                              const std::vector<std::pair<double, double>>& pts,
                              const Eigen::Vector2d& center) {
  Eigen::VectorXd v(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i)
    v[i] = interp_profile(radial_coord(d, i, center), pts);
  return v;
}

// Solve for the plateau value so the field has mean 1 (monotone in b).
double bisect_mean_one(const Domain& d,
                       const std::function<Eigen::VectorXd(double)>& field_of_b,
                       double blo, double bhi) {
  auto mean_at = [&](double b) { return density_mean(d, field_of_b(b)); };
  double flo = mean_at(blo) - 1.0, fhi = mean_at(bhi) - 1.0;
  if (flo > 0 || fhi < 0) throw DensityError("plateau solve bracket failed");
  for (int it = 0; it < 200; ++it) {
    const double bm = 0.5 * (blo + bhi);
    const double fm = mean_at(bm) - 1.0;
    if (std::abs(fm) < 1e-13) return bm;
    (fm < 0 ? blo : bhi) = bm;
  }
  return 0.5 * (blo + bhi);
}

}  // namespace

double interp_profile(double r, const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw DensityError("profile needs >= 2 points");
  if (r <= pts.front().first) return pts.front().second;
  if (r >= pts.back().first) return pts.back().second;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (r <= pts[i + 1].first) {
      const double w = (r - pts[i].first) / (pts[i + 1].first - pts[i].first);
      return (1 - w) * pts[i].second + w * pts[i + 1].second;
    }
  }
  return pts.back().second;
}

double density_mean(const Domain& d, const Eigen::VectorXd& values) {
  double s = 0;
  if (d.is1d()) {
    for (const auto& e : d.elems)
      for (int q = 0; q < 3; ++q)
        s += e.wq[q] * (values[e.a] * e.phia[q] + values[e.b] * e.phib[q]);
  } else {
    for (size_t t = 0; t < d.tris.size(); ++t) {
      const auto& tri = d.tris[t];
      const auto& g = d.tri_geo[t];
      const double area =
          0.5 * std::abs((g[1] - g[0]).x() * (g[2] - g[0]).y() -
                         (g[1] - g[0]).y() * (g[2] - g[0]).x());
      double vf[3];
      for (int k = 0; k < 3; ++k) {
        vf[k] = values[tri[k]];
        if (!d.mass_factor.empty()) vf[k] *= d.mass_factor[tri[k]];
      }
      for (int q = 0; q < 3; ++q)
        s += area / 3.0 * 0.5 * (vf[q] + vf[(q + 1) % 3]);
    }
  }
  return s / d.volume;
}

DensityField constant_density(const Domain& d, double value) {
  if (!(value > 0)) throw DensityError("density must be positive");
  DensityField f;
  f.values = Eigen::VectorXd::Constant(d.num_nodes(), value);
  f.mean = value;
  return f;
}

DensityField nodal_density(const Domain& d, const Eigen::VectorXd& values) {
  if (values.size() != d.num_nodes()) throw DensityError("size mismatch");
  if (values.minCoeff() <= 0) throw DensityError("density must be positive");
  DensityField f;
  f.values = values;
  f.mean = density_mean(d, values);
  return f;
}

DensityField normalize_mean(const Domain& d, const DensityField& f) {
  DensityField out;
  out.values = f.values / density_mean(d, f.values);
  out.mean = 1.0;
  return out;
}

Family family_from_string(const std::string& name) {
  if (name == "concentration_i") return Family::ConcentrationI;
  if (name == "conductivity_ii") return Family::ConductivityII;
  if (name == "witten_iii") return Family::WittenIII;
  if (name == "buser_sigma") return Family::BuserSigma;
  if (name == "buser_rho") return Family::BuserRho;
  if (name == "cap_rho_t") return Family::CapRhoT;
  if (name == "blowup_phi") return Family::BlowupPhi;
  if (name == "neck_gamma") return Family::NeckGamma;
  if (name == "cylinder_sigma") return Family::CylinderSigma;
  throw DensityError("unknown density family: " + name);
}

std::string family_to_string(Family f) {
  switch (f) {
    case Family::ConcentrationI: return "concentration_i";
    case Family::ConductivityII: return "conductivity_ii";
    case Family::WittenIII: return "witten_iii";
    case Family::BuserSigma: return "buser_sigma";
    case Family::BuserRho: return "buser_rho";
    case Family::CapRhoT: return "cap_rho_t";
    case Family::BlowupPhi: return "blowup_phi";
    case Family::NeckGamma: return "neck_gamma";
    case Family::CylinderSigma: return "cylinder_sigma";
  }
  throw DensityError("unknown family enum");
}

double buser_b_lower(int n, double eps, double a) {
  const double p = std::pow(2.0, n);
  return (1 - p * std::pow(eps, n - 1 - a)) / (1 - p * std::pow(eps, n));
}

double buser_b_upper(int n, double eps, double a) {
  return (1 - std::pow(eps, n - 1 - a)) / (1 - std::pow(eps, n));
}

DensityField make_density(const Domain& d, const FamilySpec& spec) {
  const int n = std::max(d.n, 2);
  const double eps = spec.eps;
  const Eigen::Vector2d c0 =
      spec.centers.empty() ? Eigen::Vector2d::Zero() : spec.centers[0];

  switch (spec.family) {
    case Family::ConcentrationI: {
      check_eps(eps);
      const double h = std::pow(eps, -n);
      return nodal_density(
          d, radial_values(d, {{0, h}, {eps, h}, {2 * eps, eps}, {1e30, eps}}, c0));
    }
    case Family::ConductivityII: {
      check_eps(eps);
      const double h = std::pow(eps, 5);
      return nodal_density(
          d, radial_values(d, {{0, h}, {eps, h}, {2 * eps, 1}, {1e30, 1}}, c0));
    }
    case Family::WittenIII: {
      check_eps(eps);
      std::vector<Eigen::Vector2d> centers = spec.centers;
      if (centers.empty()) {
        if (d.kind != Kind::FlatTorus)
          throw DensityError("witten_iii needs ball centers on this domain");
        const double L = torus_period(d);
        centers = {Eigen::Vector2d(0.25 * L, 0.25 * L),
                   Eigen::Vector2d(0.75 * L, 0.75 * L)};
      }
      if ((int)centers.size() < spec.k + 1)
        throw DensityError("witten_iii needs k+1 ball centers");
      for (size_t i = 0; i < centers.size(); ++i)
        for (size_t j = i + 1; j < centers.size(); ++j) {
          double dist = (centers[i] - centers[j]).norm();
          if (d.kind == Kind::FlatTorus) {
            const double L = torus_period(d);
            Eigen::Vector2d dv = centers[i] - centers[j];
            for (int c = 0; c < 2; ++c) {
              double v = std::fmod(std::abs(dv[c]), L);
              dv[c] = std::min(v, L - v);
            }
            dist = dv.norm();
          }
          if (dist < 4 * eps)
            throw DensityError("witten_iii balls overlap");
        }
      const double h = std::pow(eps, -n), lo = std::pow(eps, n);
      Eigen::VectorXd v(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i) {
        double r = 1e30;
        for (const auto& c : centers) r = std::min(r, radial_coord(d, i, c));
        v[i] = interp_profile(r, {{0, h}, {eps, h}, {2 * eps, lo}, {1e30, lo}});
      }
      return nodal_density(d, v);
    }
    case Family::BuserSigma: {
      check_eps(eps);
      if (!(spec.a > 0 && spec.a < 1)) throw DensityError("need a in (0,1)");
      const double h = std::pow(eps, -1 - spec.a);
      auto field_of_b = [&](double b) {
        return radial_values(d, {{0, h}, {eps, h}, {2 * eps, b}, {1e30, b}}, c0);
      };
      const double b = bisect_mean_one(d, field_of_b, 0.0, 1.5);
      spec.solved_b = b;
      return nodal_density(d, field_of_b(b));
    }
    case Family::BuserRho: {
      check_eps(eps);
      if (!(spec.a > 0 && spec.a < 1)) throw DensityError("need a in (0,1)");
      const double h = std::pow(eps, -1 - spec.a);
      auto field_of_b = [&](double b) {
        Eigen::VectorXd v(d.num_nodes());
        for (int i = 0; i < d.num_nodes(); ++i)
          v[i] = radial_coord(d, i, c0) <= eps * (1 + 1e-12) ? h : b;
        return v;
      };
      const double b = bisect_mean_one(d, field_of_b, 0.0, 1.5);
      spec.solved_b = b;
      return nodal_density(d, field_of_b(b));
    }
    case Family::CapRhoT: {
      const double t = spec.t;
      if (!(t > 0)) throw DensityError("need t > 0");
      Eigen::VectorXd v(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i) {
        const double r = radial_coord(d, i, c0);
        const double den = t * t * r * r + 1;
        v[i] = 4 * t * t / (den * den);
      }
      return nodal_density(d, v);
    }
    case Family::BlowupPhi: {
      if (!(eps > 0 && eps < 1)) throw DensityError("eps must lie in (0,1)");
      // V = the half of the domain with small first coordinate
      double xmax = 0;
      auto coord = [&](int i) { return d.is1d() ? d.x[i] : d.nodes2d[i].x(); };
      double period;
      if (d.kind == Kind::FlatTorus) {
        period = torus_period(d);
      } else {
        for (int i = 0; i < d.num_nodes(); ++i) xmax = std::max(xmax, coord(i));
        period = xmax;
      }
      auto field_of_b = [&](double b) {
        Eigen::VectorXd v(d.num_nodes());
        for (int i = 0; i < d.num_nodes(); ++i)
          v[i] = coord(i) < period / 2 ? eps : b;
        return v;
      };
      const double b = bisect_mean_one(d, field_of_b, eps, 2.0);
      spec.solved_b = b;
      return nodal_density(d, field_of_b(b));
    }
    case Family::NeckGamma: {
      if (d.kind != Kind::WarpedProduct)
        throw DensityError("neck_gamma needs a warped product");
      const double S = unit_sphere_area(d.n);
      Eigen::VectorXd v(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i)
        v[i] = std::max(std::pow(d.node_cross[i] / S, 1.0 / (d.n - 1)), 1e-300);
      DensityField f;
      f.values = v;  // geometry profile, exposed for checks; not mean-normalized
      f.mean = density_mean(d, v);
      return f;
    }
    case Family::CylinderSigma: {
      if (d.kind != Kind::WarpedProduct)
        throw DensityError("cylinder_sigma needs a warped product");
      if (!(spec.t1 > spec.t0))
        throw DensityError("cylinder_sigma needs a neck window t0 < t1");
      const double S = unit_sphere_area(d.n);
      Eigen::VectorXd v(d.num_nodes());
      for (int i = 0; i < d.num_nodes(); ++i) {
        if (d.x[i] >= spec.t0 && d.x[i] <= spec.t1) {
          if (!(d.node_cross[i] > 0))
            throw DensityError("degenerate profile inside the neck window");
          v[i] = S / d.node_cross[i];
        } else {
          v[i] = 1.0;
        }
      }
      return nodal_density(d, v);
    }
  }
  throw DensityError("unknown family enum");
}

Eigen::VectorXd make_test_function(const Domain& d, const TestFunctionSpec& spec) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d.num_nodes());
  switch (spec.shape) {
    case TestShape::Annulus: {
      if (!(spec.r > 0 && spec.r < spec.R))
        throw DensityError("annulus needs 0 < r < R");
      const Eigen::Vector2d c(spec.center, 0.0);
      for (int i = 0; i < d.num_nodes(); ++i) {
        const double dist = d.is1d() ? std::abs(d.x[i] - spec.center)
                                     : radial_coord(d, i, c);
        if (dist <= spec.r / 2 || dist >= 2 * spec.R) continue;
        if (dist < spec.r)
          u[i] = 2 * dist / spec.r - 1;
        else if (dist <= spec.R)
          u[i] = 1;
        else
          u[i] = 2 - dist / spec.R;
      }
      break;
    }
    case TestShape::Plateau: {
      if (!(spec.r > 0 && spec.r < spec.R))
        throw DensityError("plateau needs 0 < r < R");
      const Eigen::Vector2d c(spec.center, 0.0);
      for (int i = 0; i < d.num_nodes(); ++i) {
        const double dist = d.is1d() ? std::abs(d.x[i] - spec.center)
                                     : radial_coord(d, i, c);
        if (dist <= spec.r)
          u[i] = 1;
        else if (dist < spec.R)
          u[i] = (spec.R - dist) / (spec.R - spec.r);
      }
      break;
    }
    case TestShape::CylinderTent: {
      if (!d.is1d()) throw DensityError("cylinder tent needs a 1-D model");
      if (spec.k < 0 || spec.j < 0 || spec.j > 2 * spec.k + 1)
        throw DensityError("tent slot out of range");
      const double s = 6 * (spec.k + 1) * spec.eps;  // ramp slope
      const double len = 1.0 / (2 * (spec.k + 1) * spec.eps);
      const double lo = spec.t0 + spec.j * len;
      for (int i = 0; i < d.num_nodes(); ++i) {
        const double t = d.x[i] - lo;
        if (t <= 0 || t >= 3.0 / s) continue;
        if (t <= 1.0 / s)
          u[i] = s * t;
        else if (t <= 2.0 / s)
          u[i] = 1;
        else
          u[i] = 3 - s * t;
      }
      break;
    }
  }
  if (u.maxCoeff() <= 0) throw DensityError("test function support misses all nodes");
  return u;
}

double dumbbell_length() { return kPi + 4.0; }

std::function<double(double)> dumbbell_profile(double eps) {
  // eps = 1 is the unpinched base geometry
  if (!(eps > 0 && eps <= 1)) throw DensityError("eps must lie in (0,1]");
  const double cap = kPi / 2;
  const double L = dumbbell_length();
  return [eps, cap, L](double t) {
    if (t < 0 || t > L) throw DensityError("profile argument out of range");
    if (t < cap) return std::sin(t);
    if (t > L - cap) return std::sin(L - t);
    const double s = std::abs(t - cap - 2.0);  // distance to the neck center
    if (s <= 0.5) return eps;
    if (s >= 1.0) return 1.0;
    return eps + (1 - eps) * (s - 0.5) / 0.5;
  };
}

double capped_cylinder_length(double eps) { return kPi + 1.0 / eps; }

std::function<double(double)> capped_cylinder_profile(double eps) {
  if (!(eps > 0 && eps < 1)) throw DensityError("eps must lie in (0,1)");
  const double cap = kPi / 2;
  const double L = capped_cylinder_length(eps);
  return [cap, L](double t) {
    if (t < 0 || t > L) throw DensityError("profile argument out of range");
    if (t < cap) return std::sin(t);
    if (t > L - cap) return std::sin(L - t);
    return 1.0;
  };
}

}  // namespace sw
