#include "ssflow/manifold.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ssflow/errors.hpp"

namespace ssflow {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dims(const ManifoldDescriptor& desc, std::size_t size) {
  require(static_cast<int>(size) == desc.ambient_dim, ErrorCode::InvalidArgument,
          "ambient dimension mismatch: expected " + std::to_string(desc.ambient_dim) + ", got " +
              std::to_string(size));
}

}  // namespace

ManifoldDescriptor ManifoldDescriptor::unit_sphere(int ambient_dim, double tube_radius) {
  ManifoldDescriptor d;
  d.ambient_dim = ambient_dim;
  d.kind = ManifoldKind::UnitSphere;
  d.tube_radius = tube_radius;
  d.cutoff_inner = 0.5 * tube_radius;
  d.cutoff_outer = tube_radius;
  d.a_bound = 1.0;
  d.validate();
  return d;
}

ManifoldDescriptor ManifoldDescriptor::euclidean(int ambient_dim) {
  ManifoldDescriptor d;
  d.ambient_dim = ambient_dim;
  d.kind = ManifoldKind::Euclidean;
  d.tube_radius = std::numeric_limits<double>::infinity();
  d.cutoff_inner = std::numeric_limits<double>::infinity();
  d.cutoff_outer = std::numeric_limits<double>::infinity();
  d.a_bound = 0.0;
  d.validate();
  return d;
}

void ManifoldDescriptor::validate() const {
  require(ambient_dim >= 1 && ambient_dim <= 16, ErrorCode::ConfigError,
          "ambient_dim must lie in [1, 16]");
  if (kind == ManifoldKind::Euclidean) return;
  require(ambient_dim >= 2, ErrorCode::ConfigError, "sphere target needs ambient_dim >= 2");
  require(tube_radius > 0.0 && tube_radius < 1.0, ErrorCode::ConfigError,
          "unit sphere tube radius must lie in (0, 1)");
  require(cutoff_inner > 0.0 && cutoff_inner < cutoff_outer && cutoff_outer <= tube_radius,
          ErrorCode::ConfigError, "cutoff band must satisfy 0 < r_in < r_out <= tube_radius");
  require(a_bound > 0.0, ErrorCode::ConfigError, "A_bound must be positive");
}

double distance_to_manifold(const ManifoldDescriptor& desc, std::span<const double> y) {
  check_dims(desc, y.size());
  if (desc.kind == ManifoldKind::Euclidean) return 0.0;
  return std::abs(norm(y) - 1.0);
}

Vec project(const ManifoldDescriptor& desc, std::span<const double> y) {
  const double d = distance_to_manifold(desc, y);
  if (desc.kind == ManifoldKind::Euclidean) return Vec(y.begin(), y.end());
  require(d < desc.tube_radius, ErrorCode::OutsideTube,
          "point at distance " + std::to_string(d) + " from the target (tube radius " +
              std::to_string(desc.tube_radius) + ")");
  const double r = norm(y);
  Vec p(y.begin(), y.end());
  for (double& v : p) v /= r;
  return p;
}

Vec tangent_part(const ManifoldDescriptor& desc, std::span<const double> y,
                 std::span<const double> x) {
  check_dims(desc, x.size());
  Vec t(x.begin(), x.end());
  if (desc.kind == ManifoldKind::Euclidean) return t;
  const double r = norm(y);
  const double c = dot(x, y) / (r * r);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] -= c * y[i];
  return t;
}

Vec second_fundamental_form(const ManifoldDescriptor& desc, std::span<const double> y,
                            std::span<const double> x_vec, std::span<const double> y_vec,
                            double tol) {
  const double d = distance_to_manifold(desc, y);
  check_dims(desc, x_vec.size());
  check_dims(desc, y_vec.size());
  Vec out(y.size(), 0.0);
  if (desc.kind == ManifoldKind::Euclidean) return out;
  require(d <= tol, ErrorCode::NotOnManifold,
          "point is " + std::to_string(d) + " away from the target");
  const Vec tx = tangent_part(desc, y, x_vec);
  const Vec ty = tangent_part(desc, y, y_vec);
  const double c = dot(tx, ty);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * y[i];
  return out;
}

double cutoff_weight(const ManifoldDescriptor& desc, double dist) {
  if (desc.kind == ManifoldKind::Euclidean) return 0.0;
  if (dist <= desc.cutoff_inner) return 1.0;
  if (dist >= desc.cutoff_outer) return 0.0;
  const double s = (dist - desc.cutoff_inner) / (desc.cutoff_outer - desc.cutoff_inner);
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

Vec extended_form(const ManifoldDescriptor& desc, std::span<const double> y,
                  std::span<const double> x_vec, std::span<const double> y_vec) {
  check_dims(desc, y.size());
  check_dims(desc, x_vec.size());
  check_dims(desc, y_vec.size());
  Vec out(y.size(), 0.0);
  if (desc.kind == ManifoldKind::Euclidean) return out;
  const double r = norm(y);
  const double chi = cutoff_weight(desc, std::abs(r - 1.0));
  if (chi == 0.0) return out;
  const double xp = dot(x_vec, y) / r;
  const double yp = dot(y_vec, y) / r;
  const double c = chi * (dot(x_vec, y_vec) - xp * yp);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * y[i] / r;
  return out;
}

void extended_form_trace(const ManifoldDescriptor& desc, const double* y, const double* g,
                         int rows, double* out) {
  const int L = desc.ambient_dim;
  for (int c = 0; c < L; ++c) out[c] = 0.0;
  if (desc.kind == ManifoldKind::Euclidean) return;
  double r2 = 0.0;
  for (int c = 0; c < L; ++c) r2 += y[c] * y[c];
  const double r = std::sqrt(r2);
  const double chi = cutoff_weight(desc, std::abs(r - 1.0));
  if (chi == 0.0) return;
  double energy = 0.0;
  for (int i = 0; i < rows; ++i) {
    const double* gi = g + static_cast<std::ptrdiff_t>(i) * L;
    double full = 0.0;
    double normal = 0.0;
    for (int c = 0; c < L; ++c) {
      full += gi[c] * gi[c];
      normal += gi[c] * y[c];
    }
    energy += full - normal * normal / r2;
  }
  const double scale = chi * energy / r;
  for (int c = 0; c < L; ++c) out[c] = scale * y[c];
}

}  // namespace ssflow
