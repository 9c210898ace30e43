#include "specweights/hersch.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "specweights/assemble.hpp"

namespace sw {

namespace {

// conformal dilation of the sphere; for unit x the denominator
// 1 - 2<x,a> + |a|^2|x|^2 equals |x-a|^2, which is the cancellation-free form
Eigen::VectorXd mobius(const Eigen::VectorXd& a, const Eigen::VectorXd& x) {
  const Eigen::VectorXd dv = x - a;
  const double den = dv.squaredNorm();
  return ((1.0 - a.squaredNorm()) * dv - den * a) / den;
}

Eigen::VectorXd barycenter(const Eigen::VectorXd& xi,
                           const std::vector<Eigen::Vector3d>& pts,
                           const std::vector<double>& masses, double total) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
  for (size_t i = 0; i < pts.size(); ++i) b += masses[i] * mobius(xi, pts[i]);
  return b / total;
}

Eigen::VectorXd clip_ball(const Eigen::VectorXd& xi) {
  const double r = xi.norm();
  const double rmax = 1.0 - 1e-14;
  if (r <= rmax) return xi;
  return xi * (rmax / r);
}

}  // namespace

Eigen::VectorXd MobiusMap::apply(const Eigen::VectorXd& x) const {
  if (xi.size() == 0 || xi.norm() == 0.0) return x;
  return mobius(xi, x);
}

Eigen::Vector3d lift_point(const Eigen::Vector2d& z, double t) {
  const double s = t * t * z.squaredNorm() + 1.0;
  return Eigen::Vector3d(2 * t * z.x() / s, 2 * t * z.y() / s,
                         (t * t * z.squaredNorm() - 1.0) / s);
}

std::vector<Eigen::Vector3d> lift_to_sphere(const Domain& d, double t) {
  if (d.is1d()) throw HerschError("lift needs a planar 2-D domain");
  std::vector<Eigen::Vector3d> out;
  out.reserve(d.nodes2d.size());
  for (const auto& z : d.nodes2d) out.push_back(lift_point(z, t));
  return out;
}

MobiusMap center_measure(const std::vector<Eigen::Vector3d>& points,
                         const std::vector<double>& masses, double tol,
                         int max_iters) {
  if (points.size() != masses.size() || points.size() < 2)
    throw HerschError("need at least two weighted points");
  double total = 0;
  for (double m : masses) {
    if (!(m > 0)) throw HerschError("masses must be positive");
    total += m;
  }
  bool all_same = true;
  for (const auto& p : points)
    if ((p - points[0]).norm() > 1e-13) all_same = false;
  if (all_same)
    throw HerschError("measure concentrated at one point has no centering");

  auto bfun = [&](const Eigen::VectorXd& xi) {
    return barycenter(xi, points, masses, total);
  };

  MobiusMap map;
  Eigen::VectorXd xi = 0.5 * bfun(Eigen::VectorXd::Zero(3));
  double bnorm = bfun(xi).norm();
  double step = 1.0;
  int it = 0;

  // damped fixed point
  while (bnorm > tol && it < max_iters && step > 1e-8) {
    const Eigen::VectorXd cand = clip_ball(xi + step * bfun(xi));
    const double bc = bfun(cand).norm();
    ++it;
    if (bc < bnorm) {
      xi = cand;
      bnorm = bc;
      step = std::min(1.0, 2 * step);
    } else {
      step *= 0.5;
    }
  }

  // fallback for measures whose centering parameter sits near the boundary:
  // radial inflation predictor plus a few finite-difference Gauss-Newton steps
  double c = 0.5;
  while (bnorm > tol && it < max_iters && c > 1e-13) {
    const Eigen::VectorXd save = xi;
    const double save_b = bnorm;
    const double r = xi.norm();
    if (r > 0) xi = clip_ball(xi / r * (r + c * (1.0 - r)));
    for (int gn = 0; gn < 4 && it < max_iters; ++gn) {
      const Eigen::VectorXd b = bfun(xi);
      ++it;
      if (b.norm() <= tol) break;
      const double h = std::max(1e-9 * (1.0 - xi.norm()), 1e-15);
      Eigen::Matrix3d J;
      for (int j = 0; j < 3; ++j) {
        Eigen::VectorXd xp = xi;
        xp[j] += h;
        J.col(j) = (bfun(clip_ball(xp)) - b) / h;
      }
      const Eigen::Vector3d delta =
          J.colPivHouseholderQr().solve(-Eigen::Vector3d(b));
      xi = clip_ball(xi + delta);
    }
    bnorm = bfun(xi).norm();
    if (bnorm >= save_b) {
      xi = save;
      bnorm = save_b;
      c *= 0.5;
    }
  }

  if (bnorm > tol)
    throw HerschError("centering failed, best residual " + std::to_string(bnorm));
  map.xi = xi;
  map.residual = bnorm;
  map.iterations = it;
  return map;
}

HerschBound hersch_trial_bound(const Domain& d, const DensityField& rho) {
  if (d.is1d()) throw HerschError("trial bound needs a planar 2-D domain");
  if (rho.values.size() != d.num_nodes()) throw HerschError("rho size mismatch");
  const auto pts = lift_to_sphere(d, 1.0);
  const auto lump = d.lumped_weights();
  std::vector<double> masses(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    masses[i] = lump[i] * rho.values[i];

  const MobiusMap map = center_measure(pts, masses, 1e-9);

  const DensityField one = constant_density(d, 1.0);
  const AssembledForms f = assemble(d, rho, one, BC::Neumann);
  if (f.num_dofs() != d.num_nodes())
    throw HerschError("trial bound expects an unreduced Neumann assembly");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d.num_nodes());
  const double mass_tot = ones.dot(f.M * ones);

  double num = 0, den = 0;
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd psi(d.num_nodes());
    for (int i = 0; i < d.num_nodes(); ++i) psi[i] = map.apply(pts[i])[j];
    // exact discrete mean-zero correction keeps the bound certified
    psi.array() -= ones.dot(f.M * psi) / mass_tot;
    num += psi.dot(f.K * psi);
    den += psi.dot(f.M * psi);
  }
  if (!(den > 0)) throw HerschError("degenerate centered trial functions");

  HerschBound out;
  out.bound = num / den;
  out.analytic_cap = 8 * std::numbers::pi / d.volume;
  out.centering_residual = map.residual;
  return out;
}

}  // namespace sw
