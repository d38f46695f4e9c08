#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ssflow/fields.hpp"

namespace ssflow {

/// Integration region on the lattice. Balls use partial-volume node weights
/// clamp((R - |x - x0|) / h + 1/2, 0, 1) so that small radii stay smooth in R.
struct Region {
  enum class Kind { All, Ball, Box };

  Kind kind = Kind::All;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;  // ball radius or box half width

  static Region all();
  static Region ball(std::span<const double> center, double radius);
  static Region box(std::span<const double> center, double half_width);

  /// Quadrature weight in [0, 1] of the node at x.
  double weight(const GridSpec& grid, const double* x) const;
  /// True when the region lies inside the lattice box.
  bool inside(const GridSpec& grid) const;
};

/// (sum_region w |f|^p h^n)^{1/p}; p = infinity gives the max over the region.
/// `values` holds one nonnegative number per node (for example |grad u|).
/// Throws EmptyRegion when no node carries weight.
double lp_norm(std::span<const double> values, const GridSpec& grid, double p,
               const Region& region = Region::all());

/// Weak L^p quasi-norm by decreasing rearrangement: max_k f*_k (k h^n)^{1/p}.
double weak_lp_norm(std::span<const double> values, const GridSpec& grid, double p);

/// ||v||_X = sup_t sup_x |v| + sup_{t > 0} t^{1/4} ||grad v(t)||_{L^{2n}}.
/// Requires the first slice to be t = 0 with v identically zero
/// (MissingInitialSlice otherwise).
double x_norm(const FieldFamily& v);

/// Max over dyadic sub-cubes (side >= 4h) of the mean of |u - mean(u)|.
double bmo_seminorm(const LatticeField& field);

/// |grad u| per node for every slice of a family, computed once and shared by
/// the space-time functionals.
struct GradientSamples {
  GridSpec grid{};
  std::vector<double> times;
  std::vector<std::vector<double>> magnitude;
};

GradientSamples gradient_samples(const FieldFamily& u);

/// R^{-n} int_{B_R(x0) x [0, R^2]} |grad u|^2 for q = 2 and
/// R^{-2} int |grad u|^n for q = n; trapezoid rule in t over the slices, with
/// linear interpolation of the spatial integral at t = R^2.
/// Throws RegionOutsideGrid when the ball leaves the box or the slices do not
/// reach R^2.
double renormalized_energy(const GradientSamples& samples, std::span<const double> center,
                           double radius, int q);

struct HolderOptions {
  double gamma = 0.5;
  std::uint64_t seed = 1;
  int pairs = 2000;
  double r_inner = 0.5;
  double r_outer = 2.0;
  double t_max = 1.0 / 16.0;
};

/// Max over seeded point pairs (x_i, t_i) with r_inner <= |x_i| <= r_outer and
/// t_i drawn from the slices with t <= t_max of |u(z1) - u(z2)| / d_P^gamma,
/// d_P = max(|x1 - x2|, sqrt|t1 - t2|). Values off the lattice are
/// interpolated.
double holder_seminorm(const FieldFamily& u, const HolderOptions& options);

struct EnergyEntry {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;
  double energy_2 = 0.0;
  double energy_n = 0.0;
};

struct NormReport {
  std::map<double, double> lp;
  std::map<double, double> weak_lp;
  double x_norm = 0.0;
  double bmo = 0.0;
  std::vector<EnergyEntry> energies;
  double holder_gamma = 0.0;
  double holder = 0.0;
};

struct NormReportOptions {
  std::vector<double> exponents;  // empty: {2, n, 2n, infinity}
  std::vector<double> energy_radii{0.25, 0.5, 1.0};
  std::vector<double> energy_center_radii{0.5, 1.0, 2.0};
  HolderOptions holder{};
};

/// Norms of the solution u (gradient norms at the latest slice with t <= 1)
/// and of the correction v.
NormReport compute_norm_report(const FieldFamily& u, const FieldFamily& v,
                               const NormReportOptions& options);

}  // namespace ssflow
