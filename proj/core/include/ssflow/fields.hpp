#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ssflow/manifold.hpp"

namespace ssflow {

/// Truncated uniform lattice on [-R, R]^n with an odd node count per axis,
/// so the origin is a node. Nodes are stored row-major, last axis fastest.
struct GridSpec {
  int dim = 2;
  double half_width = 8.0;
  int points_per_axis = 257;

  double spacing() const { return 2.0 * half_width / (points_per_axis - 1); }
  std::size_t node_count() const;
  int center_index() const { return (points_per_axis - 1) / 2; }
  double coord(int i) const { return -half_width + i * spacing(); }
  std::size_t stride(int axis) const;
  std::array<int, 3> unravel(std::size_t node) const;
  std::size_t ravel(const std::array<int, 3>& index) const;
  void position(std::size_t node, double* x) const;
  double cell_volume() const;
  /// Same box, 2(m-1)+1 points per axis: every coarse node is a fine node.
  GridSpec refined() const;

  void validate() const;
  bool operator==(const GridSpec&) const = default;
};

/// Sampled R^L-valued map on a GridSpec; one time slice (time_label = t) or a
/// similarity-frame profile U(y) (similarity_frame = true, time_label = 1).
/// Storage is component-major: component c occupies [c*N, (c+1)*N).
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(GridSpec grid, int ambient_dim, double time_label = 0.0,
               bool similarity_frame = false);

  const GridSpec& grid() const { return grid_; }
  int ambient_dim() const { return ambient_dim_; }
  std::size_t node_count() const { return node_count_; }
  double time_label() const { return time_label_; }
  void set_time_label(double t) { time_label_ = t; }
  bool similarity_frame() const { return similarity_frame_; }
  void set_similarity_frame(bool flag) { similarity_frame_ = flag; }

  double& at(int comp, std::size_t node) { return values_[comp * node_count_ + node]; }
  double at(int comp, std::size_t node) const { return values_[comp * node_count_ + node]; }
  std::span<double> component(int comp);
  std::span<const double> component(int comp) const;
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  Vec value(std::size_t node) const;
  void set_value(std::size_t node, std::span<const double> v);

  /// max over nodes of the Euclidean norm of the value.
  double sup_norm() const;
  /// max over nodes of dist(value, N).
  double max_distance(const ManifoldDescriptor& target) const;
  bool is_finite() const;

  LatticeField& operator+=(const LatticeField& other);
  LatticeField& operator-=(const LatticeField& other);
  LatticeField& operator*=(double s);

 private:
  GridSpec grid_{};
  int ambient_dim_ = 0;
  std::size_t node_count_ = 0;
  double time_label_ = 0.0;
  bool similarity_frame_ = false;
  std::vector<double> values_;
};

LatticeField operator+(LatticeField a, const LatticeField& b);
LatticeField operator-(LatticeField a, const LatticeField& b);
LatticeField operator*(double s, LatticeField a);

/// Time slices of one space-time field, ordered by time_label. Families that
/// describe u or v start with a t = 0 slice.
struct FieldFamily {
  std::vector<LatticeField> slices;

  std::vector<double> times() const;
  const GridSpec& grid() const { return slices.front().grid(); }
  /// Index of the slice whose time label equals t (relative tolerance 1e-12);
  /// -1 when absent.
  int find(double t) const;
};

/// Initial profile phi_0 on S^{n-1}. Corotational data is
/// phi_0(w) = (sin(a) w, cos(a)) in S^n; tabulated data is interpolated from
/// samples and projected back onto the target.
class SphericalData {
 public:
  enum class Kind { Corotational, Tabulated };

  /// n = 2: n_theta samples at angle 2 pi k / n_theta (n_phi = 1).
  /// n = 3: polar angle (i + 1/2) pi / n_theta times azimuth 2 pi j / n_phi,
  /// polar index slowest.
  struct Table {
    int n_theta = 0;
    int n_phi = 1;
    std::vector<double> values;  // L per sample
  };

  static SphericalData corotational(int dim, double angle);
  /// Same data with a custom tube and cutoff band on S^n.
  static SphericalData corotational(int dim, double angle, ManifoldDescriptor target);
  static SphericalData tabulated(int dim, ManifoldDescriptor target, Table table);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double angle() const { return angle_; }
  const ManifoldDescriptor& target() const { return target_; }
  const Table& table() const { return table_; }

  /// phi_0(omega) for a unit vector omega in R^n; writes L values.
  void evaluate(const double* omega, double* out) const;
  Vec operator()(std::span<const double> omega) const;
  /// u_0(x) = phi_0(x / |x|), x != 0.
  void evaluate_homogeneous(const double* x, double* out) const;

 private:
  Kind kind_ = Kind::Corotational;
  int dim_ = 2;
  double angle_ = 0.0;
  ManifoldDescriptor target_{};
  Table table_{};
};

/// u_0 sampled on the lattice; the origin gets the projected average of its
/// 2n nearest neighbours.
LatticeField homogeneous_extend(const SphericalData& data, const GridSpec& grid);

/// ||grad u0||_{L^{n,inf}(R^n)} for u0 = phi0(x / |x|), which equals
/// ((1/n) int_{S^{n-1}} |grad_S phi0|^n)^{1/n}; evaluated by quadrature on the
/// sphere with centred differences along the sphere.
double weak_gradient_norm(const SphericalData& data);

/// Per-node n x L Jacobian; values[(axis * L + c) * N + node].
struct FieldGradient {
  GridSpec grid{};
  int ambient_dim = 0;
  std::vector<double> values;

  double at(int axis, int comp, std::size_t node) const {
    return values[(static_cast<std::size_t>(axis) * ambient_dim + comp) * grid.node_count() + node];
  }
  /// Frobenius norm |grad u| per node.
  std::vector<double> magnitude() const;
  /// Copies the n x L Jacobian at `node` into out (row = axis).
  void jacobian(std::size_t node, double* out) const;
};

/// Fourth-order central differences in the interior, second-order one-sided
/// in the two-node boundary layer. Throws GridTooSmall for m < 5.
FieldGradient gradient(const LatticeField& field);

/// Fourth-order Laplacian with the same boundary treatment.
LatticeField laplacian(const LatticeField& field);

/// Tensor-product cubic Lagrange interpolation; exact at nodes and for cubic
/// polynomials. Throws OutOfDomain outside the box.
Vec interpolate(const LatticeField& field, std::span<const double> x);
void interpolate_into(const LatticeField& field, const double* x, double* out);

/// Binary node dump: magic, n, m, R_max, L, time_label, similarity flag, then
/// row-major node values (L doubles per node). Round trip is bit-exact.
void write_field_binary(const LatticeField& field, const std::string& path);
LatticeField read_field_binary(const std::string& path);
/// CSV node dump: header row, parameter row, then one row of L values per node.
void write_field_csv(const LatticeField& field, const std::string& path);

}  // namespace ssflow
