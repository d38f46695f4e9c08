#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssflow/fields.hpp"
#include "ssflow/heat_kernel.hpp"
#include "ssflow/norms.hpp"

namespace ssflow {

/// Space-time region where a discrete residual is measured. Zero bounds pick
/// defaults from the lattice: x_max = y_max = R_max / 2.
struct ResidualWindow {
  double t_min = 0.25;
  double t_max = 4.0;
  double x_max = 0.0;  // |x|_inf bound
  double y_max = 0.0;  // |x| / sqrt(t) bound
};

struct ResidualResult {
  double sup = 0.0;
  std::size_t samples = 0;
};

/// sup |d_t u - Lap u - A_hat(u)(grad u, grad u)| over window nodes of the
/// positive-time slices that have a positive-time neighbour on each side.
/// d_t uses the three-point formula in log t, space uses fourth-order
/// differences. Throws ScheduleTooCoarse when no slice qualifies.
ResidualResult pde_residual(const FieldFamily& u, const ManifoldDescriptor& target,
                            const ResidualWindow& window = {});

struct DefectWindow {
  /// Slices with t below this are skipped; 0 selects (4h)^2.
  double t_min = 0.0;
  /// Only x with |lambda x|_inf <= fraction * R_max are compared.
  double x_fraction = 0.5;
};

/// sup |u(lambda x, lambda^2 t) - u(x, t)| over pairs of slices whose times
/// differ by lambda^2 and over lattice nodes x (lambda x is read from the
/// lattice directly when it is a node, otherwise interpolated).
/// Returns NaN when no slice pair exists.
double similarity_defect(const FieldFamily& u, double lambda, const DefectWindow& window = {});

/// |grad u|^2 and |Lap u + A_hat(u)(grad u, grad u)|^2 per node and slice,
/// for slices with t <= t_max.
struct EnergyDensities {
  GridSpec grid{};
  std::vector<double> times;
  std::vector<std::vector<double>> grad_sq;
  std::vector<std::vector<double>> tension_sq;
};

EnergyDensities energy_densities(const FieldFamily& u, const ManifoldDescriptor& target,
                                 double t_max);

struct LeiResult {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double radius = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

/// Local energy inequality on the cylinder B_R(x0) x [0, R^2]:
/// lhs = sup_t int_{B_{R/2}} |grad u|^2 + int_{B_{R/2} x [0,R^2]} |Lap u + A(u)(grad u, grad u)|^2,
/// rhs = int_{B_R} |grad u0|^2 + (64 / R^2) int_{B_R x [0,R^2]} |grad u|^2.
LeiResult local_energy_check(const EnergyDensities& densities, std::span<const double> center,
                             double radius);

struct DecayFit {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::vector<double> radii;
  std::vector<double> energies;
  double exponent = 0.0;  // least-squares slope of log E(r) against log r
};

/// Geometric radii r_k = r0 q^k, k < count.
std::vector<double> geometric_radii(double r0, double factor, int count);

/// Fits the renormalized q = 2 energy r^{-n} int_{B_r(x0) x [0, r^2]} |grad u|^2.
/// Throws DegenerateFit when every energy is below 1e-14.
DecayFit decay_exponent_fit(const GradientSamples& samples, std::span<const double> center,
                            std::span<const double> radii);

struct SmoothnessEntry {
  int order = 1;
  double radius = 0.0;
  double value = 0.0;
};

/// sup_{B_R} |D^k U| for k in {1, 2} by repeated fourth-order differences.
std::vector<SmoothnessEntry> smoothness_probe(const LatticeField& profile,
                                              std::span<const double> radii = {},
                                              std::span<const int> orders = {});

struct VerifyThresholds {
  double pde_residual = 5e-3;
  std::map<double, double> defect{{2.0, 1e-3}, {4.0, 2e-3}};
  double lei_relative_slack = 0.05;
  double decay_margin = 0.2;  // exponent >= 2/n - margin
  double semigroup_weak_ratio = 1.05;
  double semigroup_spread = 2.0;
};

struct VerifyOptions {
  ResidualWindow residual_window{};
  DefectWindow defect_window{};
  std::vector<std::array<double, 3>> lei_centers{{1.0, 0.0, 0.0}, {0.0, 1.5, 0.0}, {2.0, 0.0, 0.0}};
  std::vector<double> lei_radii{0.25, 0.5};
  std::vector<std::array<double, 3>> decay_centers{{1.0, 0.0, 0.0}};
  double decay_r0 = 0.25;
  double decay_factor = 0.7071067811865476;
  int decay_count = 4;
  /// gamma <= 0 selects 1/n.
  HolderOptions holder{0.0};
  std::vector<double> semigroup_times{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
  bool semigroup = true;
  VerifyThresholds thresholds{};
};

struct VerificationReport {
  double pde_residual = 0.0;
  std::map<double, double> similarity_defect;
  std::vector<LeiResult> lei;
  std::vector<DecayFit> decay_fits;
  double holder_gamma = 0.0;
  double holder = 0.0;
  std::optional<SemigroupReport> semigroup;
  std::vector<SmoothnessEntry> smoothness;
  std::map<std::string, bool> pass_flags;

  bool all_pass() const;
};

/// Runs the checks on a space-time family u (first slice t = 0 holds u0).
/// `profile` is the similarity slice U when available (smoothness probe).
VerificationReport run_verification(const FieldFamily& u, const SphericalData& data,
                                    const LatticeField* profile, const VerifyOptions& options);

}  // namespace ssflow
