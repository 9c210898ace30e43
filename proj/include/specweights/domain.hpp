#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sw {

enum class Kind { Interval, Circle, Disc, FlatTorus, RadialBall, WarpedProduct };

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Volume of the unit ball in R^n and area of the unit sphere S^{n-1}.
double unit_ball_volume(int n);
double unit_sphere_area(int n);

struct DomainSpec {
  Kind kind = Kind::Interval;
  int n = 1;            // ambient dimension the model represents
  int N = 100;          // resolution (1-D node count / torus grid size)
  double length = 1.0;  // interval length / circle circumference / neck span
  double radius = 1.0;  // radial ball radius
  int ell = 0;          // angular mode for radial/warped reductions
  std::vector<double> breaks;  // mandatory 1-D grid points (family break radii)
  int rings = 0, sectors = 0;  // polar disc mesh
  double grade_t = 0.0;        // >0: ring radii graded as a stereographic cap
  std::function<double(double)> profile;  // warped product gamma(t) on [0,length]
  std::string off_path;                   // triangle mesh ingestion
};

// One 1-D element with precomputed 3-point Gauss data. Weights wq already
// include the geometric factor (sphere area x r^{n-1} or gamma^{n-1}).
struct Elem1D {
  int a, b;                     // node indices
  double inv_h;                 // 1 / element length
  std::array<double, 3> xq;     // quadrature abscissae
  std::array<double, 3> wq;     // quadrature weights (with geometric weight)
  std::array<double, 3> shape;  // cross-section radius at xq (for the ell term)
  std::array<double, 3> phia;   // hat of node a at xq
  std::array<double, 3> phib;   // hat of node b at xq
};

struct Domain {
  Kind kind;
  int n = 1;
  int ell = 0;
  double volume = 0.0;

  // 1-D representation (interval, circle, radial_ball, warped_product)
  std::vector<double> x;
  std::vector<Elem1D> elems;
  bool periodic = false;
  // cross-section area at each node (1 flat, S r^{n-1} radial, S gamma^{n-1})
  std::vector<double> node_cross;

  // 2-D representation (disc, flat_torus, OFF meshes)
  std::vector<Eigen::Vector2d> nodes2d;           // representative coordinates
  std::vector<std::array<int, 3>> tris;           // connectivity
  std::vector<std::array<Eigen::Vector2d, 3>> tri_geo;  // unwrapped geometry

  std::vector<int> boundary_nodes;
  std::vector<double> mass_factor;  // conformal factor per node (empty = 1)

  bool is1d() const { return !x.empty(); }
  int num_nodes() const { return is1d() ? (int)x.size() : (int)nodes2d.size(); }
  // Lumped node weights: integral of the hat function (geometric measure).
  std::vector<double> lumped_weights() const;
};

Domain build_domain(const DomainSpec& spec);

// ASCII OFF triangle mesh; 3-D coordinates are flattened per triangle.
Domain load_off(const std::string& path);

// 2-D conformal change: multiplies the mass quadrature by `factor`, leaves the
// stiffness untouched, updates the volume.
Domain conformal_rescale_2d(const Domain& d, const Eigen::VectorXd& factor);

}  // namespace sw
