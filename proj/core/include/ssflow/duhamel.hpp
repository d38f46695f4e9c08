#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "ssflow/fields.hpp"
#include "ssflow/heat_kernel.hpp"

namespace ssflow {

enum class IterationMode { SimilarityFrame, SpaceTime };

std::string_view to_string(IterationMode mode);
IterationMode iteration_mode_from_string(std::string_view name);

/// Geometric time grid anchored at t = 1: all t = ratio^k with
/// t_min <= t <= t_max (within a relative 1e-9), so t = 1 is always a slice
/// when t_min <= 1 <= t_max and t -> ratio^j t maps slices to slices.
struct TimeSchedule {
  double t_min = 1e-3;
  double ratio = 1.4142135623730951;
  double t_max = 16.0;

  /// Positive slice times in increasing order.
  std::vector<double> times() const;
  void validate() const;
};

struct IterationConfig {
  double delta = 0.2;
  int max_iter = 40;
  double tol_fix = 1e-7;
  TimeSchedule schedule{};
  int quad_panels = 48;
  IterationMode mode = IterationMode::SimilarityFrame;
  /// SourceUnbounded is raised once sup |A_hat(u)(grad u, grad u)| exceeds this.
  double source_cap = 1e4;
  /// Angular quadrature of u0_hat.
  CaloricOptions caloric{};

  void validate(const ManifoldDescriptor& target) const;
};

enum class IterationStatus { Converged, MaxIter, LeftBall, LeftTube };

std::string_view to_string(IterationStatus status);

/// One Picard step v_k = S(v_{k-1}).
struct TraceRecord {
  int k = 0;
  double x_norm = 0.0;     // ||v_k||_X
  double increment = 0.0;  // ||v_k - v_{k-1}||_X
  double theta = std::numeric_limits<double>::quiet_NaN();  // increment_k / increment_{k-1}
  double dist_n = 0.0;     // sup dist(u0_hat + v_k, N)
  double residual = 0.0;   // sup |v_{k-1} - S(v_{k-1})|
};

struct FixedPointTrace {
  std::vector<TraceRecord> records;
  IterationStatus status = IterationStatus::MaxIter;
  /// sup |u - Pi_N(u)| of the returned solution (NaN unless converged).
  double projection_defect = std::numeric_limits<double>::quiet_NaN();
};

struct PicardResult {
  FieldFamily v;
  FieldFamily u;
  FixedPointTrace trace;
};

struct ProbeResult {
  /// max over pairs of ||S(v1) - S(v2)||_X / ||v1 - v2||_X
  double theta = 0.0;
  /// max over all drawn v of ||S(v)||_X
  double max_image_norm = 0.0;
  /// max over all drawn v of ||v||_X
  double max_input_norm = 0.0;
};

/// The solution operator S(v)(t) = int_0^t e^{(t-s)Lap} A_hat(u)(grad u, grad u)(s) ds,
/// u = u0_hat + v, and the Picard iteration built on it.
///
/// SimilarityFrame families are {t = 0: 0, t = 1: V} and use the one-slice identity
/// V(y) = int_0^1 s^{n/2-1} int k_{1-s}(y - sqrt(s) w) G(w) dw ds,
/// G = A_hat(U)(grad U, grad U), U = U0_hat + V. The w-integral treats G as
/// piecewise linear on the lattice and integrates the Gaussian against each
/// hat function exactly; the s-integral uses Gauss-Legendre panels in
/// sigma = sqrt(s) on [0, 1/2] and tau = sqrt(1 - s) on [1/2, 1].
///
/// SpaceTime families hold v at t = 0 and every schedule time; S is evaluated
/// by stepping w(t_{j+1}) = e^{dt Lap} w(t_j) + int_{t_j}^{t_{j+1}} e^{(t_{j+1}-s)Lap} F(s) ds
/// with s = t_{j+1} - tau^2 (s = sigma^2 on the first interval) and v(s)
/// interpolated cubically in log t.
///
/// In both modes the source vanishes outside the lattice box.
class DuhamelSolver {
 public:
  DuhamelSolver(SphericalData data, GridSpec grid, IterationConfig config);
  ~DuhamelSolver();
  DuhamelSolver(DuhamelSolver&&) noexcept;
  DuhamelSolver& operator=(DuhamelSolver&&) noexcept;

  const SphericalData& data() const;
  const GridSpec& grid() const;
  const IterationConfig& config() const;
  const ManifoldDescriptor& target() const;

  /// u0_hat on the mode's slices (t = 1 only in the similarity frame, t = 0
  /// plus the schedule in space-time mode, where t = 0 holds u0).
  const FieldFamily& caloric() const;
  const CaloricExtension& caloric_extension() const;
  /// Zero family on the mode's slices.
  FieldFamily zero() const;
  /// u = u0_hat + v; slice t = 0 is u0 in both modes.
  FieldFamily assemble(const FieldFamily& v) const;
  /// ||grad u0||_{L^{n,inf}} (smallness of the data).
  double data_gradient_weak_norm() const;
  /// sup over positive-time slices of dist(u0_hat + v, N).
  double distance_to_target(const FieldFamily& v) const;

  /// S(v).
  FieldFamily apply(const FieldFamily& v) const;
  PicardResult picard_iterate() const;
  /// Seeded pairs of smooth bump families with ||v||_X in [0.3, 0.95] delta.
  ProbeResult contraction_probe(int pairs, std::uint64_t seed) const;
  /// sup over slices of |v - S(v)|.
  double duhamel_residual(const FieldFamily& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Pointwise family arithmetic (identical slice times required).
FieldFamily family_difference(const FieldFamily& a, const FieldFamily& b);
double family_sup_norm(const FieldFamily& a);

/// Space-time family of a self-similar solution: slice t = 0 is u0 on the
/// lattice and slice t > 0 is u0_hat(x, t) + V(x / sqrt t), with V taken as
/// zero outside its box.
FieldFamily expand_similarity(const CaloricExtension& caloric, const LatticeField& profile_v,
                              const GridSpec& grid, std::span<const double> times);

}  // namespace ssflow
