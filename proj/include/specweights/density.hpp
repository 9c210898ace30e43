#pragma once

#include <Eigen/Dense>
#include <map>
#include <stdexcept>
#include <string>

#include "specweights/domain.hpp"

namespace sw {

struct DensityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DensityField {
  Eigen::VectorXd values;
  double mean = 1.0;  // volume average against the geometric measure
};

DensityField constant_density(const Domain& d, double value);
DensityField nodal_density(const Domain& d, const Eigen::VectorXd& values);
double density_mean(const Domain& d, const Eigen::VectorXd& values);
DensityField normalize_mean(const Domain& d, const DensityField& f);

enum class Family {
  ConcentrationI,   // rho = eps^-n in B(eps), eps outside B(2 eps)
  ConductivityII,   // sigma = eps^5 in B(eps), 1 outside B(2 eps)
  WittenIII,        // rho = eps^-n on balls B(x_i, eps), eps^n outside B(2 eps)
  BuserSigma,       // eps^{-1-a} in B(eps), b_eps beyond 2 eps; mass = omega_n
  BuserRho,         // eps^{-1-a} in B(eps), b_eps outside (closed form)
  CapRhoT,          // 4 t^2 / (t^2 r^2 + 1)^2
  BlowupPhi,        // rho_eps = eps on V, c_eps elsewhere, mean one
  NeckGamma,        // dumbbell warp profile (geometry, exposed for checks)
  CylinderSigma,    // sigma = gamma^{-(n-1)} on the neck, 1 on the caps
};

Family family_from_string(const std::string& name);
std::string family_to_string(Family f);

struct FamilySpec {
  Family family = Family::CapRhoT;
  double eps = 0.1;
  double a = 0.5;   // Buser exponent, in (0,1)
  double t = 1.0;   // cap parameter
  double p = 1.0;   // Witten power
  int k = 1;        // number of extra concentration balls
  std::vector<Eigen::Vector2d> centers;  // Witten ball centers (2-D domains)
  double t0 = 0.0, t1 = 0.0;  // neck window for cylinder_sigma
  // Filled by make_density for the Buser families: the solved plateau value.
  mutable double solved_b = 0.0;
};

DensityField make_density(const Domain& d, const FamilySpec& spec);

// Closed-form bracket for the Buser sigma plateau.
double buser_b_lower(int n, double eps, double a);
double buser_b_upper(int n, double eps, double a);

enum class TestShape { Annulus, Plateau, CylinderTent };

struct TestFunctionSpec {
  TestShape shape = TestShape::Annulus;
  double center = 0.0;  // 1-D center coordinate
  double r = 0.1, R = 0.2;  // annulus radii (support in 2A)
  // cylinder tent: slot j of 2(k+1) subdivisions of a neck [t0, t0 + 1/eps]
  int k = 0, j = 0;
  double eps = 0.1, t0 = 0.0;
};

Eigen::VectorXd make_test_function(const Domain& d, const TestFunctionSpec& spec);

// Piecewise-linear monotone interpolation in r used by every transition zone.
double interp_profile(double r, const std::vector<std::pair<double, double>>& pts);

// Warp profiles for the neck constructions (sphere caps of radius 1).
// Dumbbell: radius-1 cylinder of length 4 pinched to eps in the middle,
// closed by hemispherical caps; total length pi + 4.
std::function<double(double)> dumbbell_profile(double eps);
double dumbbell_length();
// Capped cylinder: radius-1 cylinder of length 1/eps closed by caps.
std::function<double(double)> capped_cylinder_profile(double eps);
double capped_cylinder_length(double eps);

}  // namespace sw
