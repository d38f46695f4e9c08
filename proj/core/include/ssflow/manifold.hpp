#pragma once

#include <span>
#include <vector>

namespace ssflow {

using Vec = std::vector<double>;

/// Shipped targets. Euclidean is the flat target (projection = identity,
/// vanishing second fundamental form); it exists for linear-heat checks.
enum class ManifoldKind { UnitSphere, Euclidean };

/// Compact target N embedded in R^L together with its tubular neighbourhood
/// and the cutoff band used to extend the second fundamental form to all of R^L.
struct ManifoldDescriptor {
  int ambient_dim = 3;
  ManifoldKind kind = ManifoldKind::UnitSphere;
  double tube_radius = 0.5;
  double cutoff_inner = 0.25;
  double cutoff_outer = 0.5;
  double a_bound = 1.0;

  /// Unit sphere S^{L-1} in R^L with cutoff band [tube/2, tube].
  static ManifoldDescriptor unit_sphere(int ambient_dim, double tube_radius = 0.5);
  static ManifoldDescriptor euclidean(int ambient_dim);

  void validate() const;
};

double distance_to_manifold(const ManifoldDescriptor& desc, std::span<const double> y);

/// Nearest-point projection; throws OutsideTube when dist(y, N) >= tube_radius.
Vec project(const ManifoldDescriptor& desc, std::span<const double> y);

/// Tangent-space projection at a point of N.
Vec tangent_part(const ManifoldDescriptor& desc, std::span<const double> y,
                 std::span<const double> x);

/// A(y)(X, Y) for y on N. Normal components of X and Y are removed first.
/// Sign convention: A(y)(X, X) = |X|^2 y on the unit sphere, so the flow
/// d_t u = Lap u + A(u)(grad u, grad u) keeps |u| = 1.
Vec second_fundamental_form(const ManifoldDescriptor& desc, std::span<const double> y,
                            std::span<const double> x_vec, std::span<const double> y_vec,
                            double tol = 1e-8);

/// C^2 cutoff in the normal distance: 1 on [0, r_in], 0 on [r_out, inf).
double cutoff_weight(const ManifoldDescriptor& desc, double dist);

/// Bounded extension A_hat(y)(X, Y) = chi(dist(y,N)) A(Pi(y))(P X, P Y),
/// defined on all of R^L.
Vec extended_form(const ManifoldDescriptor& desc, std::span<const double> y,
                  std::span<const double> x_vec, std::span<const double> y_vec);

/// Hot-path contraction sum_i A_hat(y)(g_i, g_i) for the n gradient rows
/// g = [g_0 | g_1 | ...] (each of length L). Result is written to out[0..L).
void extended_form_trace(const ManifoldDescriptor& desc, const double* y, const double* g,
                         int rows, double* out);

}  // namespace ssflow
