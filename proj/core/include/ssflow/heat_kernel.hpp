#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ssflow/fields.hpp"

namespace ssflow {

/// Values outside the box: maps a point x (n coordinates) to L values.
using FarFieldFn = std::function<void(const double* x, double* out)>;

/// e^{t Lap} on a lattice by separable Gaussian sums. Per-axis weights are
/// the sampled 1D kernel h k_t(jh), |j| <= K with K = ceil(truncation / h),
/// normalized to sum to 1.
class HeatOperator {
 public:
  HeatOperator(GridSpec grid, double t, double truncation_factor = 8.0);

  const GridSpec& grid() const { return grid_; }
  double time() const { return t_; }
  double truncation_radius() const { return truncation_; }
  int half_taps() const { return half_taps_; }
  /// 2K+1 normalized weights, index K is the centre tap.
  const std::vector<double>& weights() const { return weights_; }

  /// Zero far field (decaying fields such as v and the Duhamel source).
  LatticeField apply(const LatticeField& field) const;
  /// Far field read from `far_field` on a padded lattice (caloric data).
  LatticeField apply(const LatticeField& field, const FarFieldFn& far_field) const;

 private:
  GridSpec grid_;
  double t_;
  double truncation_;
  int half_taps_;
  std::vector<double> weights_;
};

/// Angular quadrature settings for the caloric extension.
struct CaloricOptions {
  /// Gauss-Legendre points in the polar angle measured from x / |x|.
  int theta_points = 48;
  /// Trapezoid points in the azimuth (n = 3); 0 picks 4 for corotational
  /// data (exact for data linear in omega) and 32 for tabulated data.
  int phi_points = 0;
  /// Angular window: the Gaussian factor exp(-q^2 sin^2 theta) is dropped
  /// once q sin theta exceeds this value (q = |x| / (2 sqrt t)).
  double window = 7.0;
};

/// u0_hat(x, t) = (e^{t Lap} u0)(x) for homogeneous degree-zero data
/// u0(x) = phi0(x / |x|). The radial integral is done in closed form and the
/// angular integral by quadrature, so no lattice is involved.
class CaloricExtension {
 public:
  explicit CaloricExtension(SphericalData data, CaloricOptions options = {});

  const SphericalData& data() const { return data_; }
  int dim() const { return data_.dim(); }
  int ambient_dim() const { return data_.target().ambient_dim; }

  void evaluate(const double* x, double t, double* out) const;
  Vec operator()(std::span<const double> x, double t) const;
  /// u0_hat(., t) on the lattice.
  LatticeField slice(const GridSpec& grid, double t) const;

 private:
  SphericalData data_;
  CaloricOptions options_;
  int phi_points_;
  std::vector<double> unit_nodes_;
  std::vector<double> unit_weights_;
};

/// U0_hat(y) = (e^{Lap} u0)(y), the t = 1 slice; u0_hat(x, t) = U0_hat(x / sqrt t).
LatticeField caloric_extension_slice(const SphericalData& data, const GridSpec& grid);

struct SemigroupRow {
  double t = 0.0;
  /// ||grad u0_hat(t)||_{L^{n,inf}} / ||grad u0||_{L^{n,inf}}
  double weak_ratio = 0.0;
  /// t^{1/4} ||grad u0_hat(t)||_{L^{2n}} / ||grad u0||_{L^{n,inf}}
  double l2n_scaled = 0.0;
  /// t^{(n/2)(1/n - 1/p)} ||grad u0_hat(t)||_{L^p} / ||grad u0||_{L^{n,inf}}
  double lp_scaled = 0.0;
};

struct SemigroupReport {
  int dim = 2;
  double p = 0.0;
  double weak_u0 = 0.0;
  std::vector<SemigroupRow> rows;

  double max_weak_ratio() const;
  /// max / min of the column over all rows (1 when constant; 0 for empty or zero data).
  double l2n_spread() const;
  double lp_spread() const;
};

/// Measured constants of the heat-kernel gradient estimates. The slice at
/// time t lives on the lattice scaled by sqrt(t) (same node count), so every
/// time is resolved; the u0 norm comes from weak_gradient_norm.
SemigroupReport semigroup_estimate_report(const SphericalData& data, const GridSpec& grid,
                                          std::span<const double> times, double p);

}  // namespace ssflow
