#pragma once

#include <vector>

#include "ssflow/fields.hpp"

namespace ssflow {

/// Corotational expander profiles. With U(y) = (sin psi(rho) y/rho, cos psi(rho))
/// the profile equation Lap U + (y/2).grad U + |grad U|^2 U = 0 reduces to
///   psi'' + ((n-1)/rho + rho/2) psi' - (n-1) sin(2 psi) / (2 rho^2) = 0,
/// psi(0) = 0, psi(inf) = alpha.
struct ProfileOptions {
  double rho0 = 1e-4;
  double rho_max = 30.0;
  double output_step = 1.0 / 64.0;
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
};

struct ProfileSamples {
  std::vector<double> rho;
  std::vector<double> psi;
  std::vector<double> dpsi;
};

/// Adaptive Dormand-Prince integration from rho0 with the series start
/// psi = a rho + c rho^3, c = -(a/2 + (2/3)(n-1) a^3) / (2(n+2)).
/// The samples start at rho = 0 (psi = 0, psi' = a) and then follow the
/// uniform output grid up to rho_max. Throws BlowUp once |psi| > pi.
ProfileSamples integrate_profile(int n, double a, const ProfileOptions& options = {});

/// Coefficients of the tail psi ~ psi_inf + c2 / rho^2 + c4 / rho^4.
struct TailCoefficients {
  double c2 = 0.0;
  double c4 = 0.0;
};
TailCoefficients tail_coefficients(int n, double psi_inf);

/// psi_inf from psi(rho) at a large radius, solving
/// psi = psi_inf + c2(psi_inf)/rho^2 + c4(psi_inf)/rho^4 by fixed-point iteration.
double extrapolate_limit(int n, double rho, double psi);

/// Least-squares slope of log |psi - psi_inf| against log rho on [rho_lo, rho_max].
double fit_tail_exponent(const ProfileSamples& samples, double psi_inf, double rho_lo = 10.0);

struct ShootOptions {
  double tol_shoot = 1e-10;
  double max_slope = 2.0;
  ProfileOptions profile{};
};

struct ProfileSolution {
  int dim = 2;
  double alpha = 0.0;
  double slope = 0.0;
  double psi_inf = 0.0;
  bool converged = false;
  double tail_fit = 0.0;
  int iterations = 0;
  ProfileSamples samples;

  /// psi(rho): cubic Hermite on the samples, tail expansion beyond rho_max.
  double psi(double rho) const;
};

/// Bisection on the slope a with bracketing by doubling; |psi_inf - alpha| <= tol_shoot.
/// Throws NoBracket when no bracket exists for |a| <= max_slope.
ProfileSolution shoot(int n, double alpha, const ShootOptions& options = {});

/// U(y) = (sin psi(|y|) y / |y|, cos psi(|y|)) on the lattice; the origin is the north pole.
LatticeField lift_profile(const ProfileSolution& profile, const GridSpec& grid);

}  // namespace ssflow
