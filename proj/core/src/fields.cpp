#include "ssflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "ssflow/errors.hpp"
#include "ssflow/quadrature.hpp"

namespace ssflow {

// ---------------------------------------------------------------------------
// GridSpec

std::size_t GridSpec::node_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
  return n;
}

std::size_t GridSpec::stride(int axis) const {
  std::size_t s = 1;
  for (int a = dim - 1; a > axis; --a) s *= static_cast<std::size_t>(points_per_axis);
  return s;
}

std::array<int, 3> GridSpec::unravel(std::size_t node) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(node % points_per_axis);
    node /= points_per_axis;
  }
  return idx;
}

std::size_t GridSpec::ravel(const std::array<int, 3>& index) const {
  std::size_t node = 0;
  for (int a = 0; a < dim; ++a) node = node * points_per_axis + index[a];
  return node;
}

void GridSpec::position(std::size_t node, double* x) const {
  const auto idx = unravel(node);
  for (int a = 0; a < dim; ++a) x[a] = coord(idx[a]);
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }

GridSpec GridSpec::refined() const {
  GridSpec g = *this;
  g.points_per_axis = 2 * (points_per_axis - 1) + 1;
  return g;
}

void GridSpec::validate() const {
  require(dim == 2 || dim == 3, ErrorCode::ConfigError, "grid dimension must be 2 or 3");
  require(half_width > 0.0, ErrorCode::ConfigError, "grid half width must be positive");
  require(points_per_axis >= 3 && points_per_axis % 2 == 1, ErrorCode::ConfigError,
          "points per axis must be odd and at least 3");
}

// ---------------------------------------------------------------------------
// LatticeField

LatticeField::LatticeField(GridSpec grid, int ambient_dim, double time_label, bool similarity_frame)
    : grid_(grid),
      ambient_dim_(ambient_dim),
      node_count_(grid.node_count()),
      time_label_(time_label),
      similarity_frame_(similarity_frame),
      values_(node_count_ * static_cast<std::size_t>(ambient_dim), 0.0) {
  grid_.validate();
  require(ambient_dim >= 1, ErrorCode::InvalidArgument, "ambient dimension must be positive");
}

std::span<double> LatticeField::component(int comp) {
  return {values_.data() + comp * node_count_, node_count_};
}

std::span<const double> LatticeField::component(int comp) const {
  return {values_.data() + comp * node_count_, node_count_};
}

Vec LatticeField::value(std::size_t node) const {
  Vec v(ambient_dim_);
  for (int c = 0; c < ambient_dim_; ++c) v[c] = at(c, node);
  return v;
}

void LatticeField::set_value(std::size_t node, std::span<const double> v) {
  for (int c = 0; c < ambient_dim_; ++c) at(c, node) = v[c];
}

double LatticeField::sup_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < node_count_; ++i) {
    double s = 0.0;
    for (int c = 0; c < ambient_dim_; ++c) s += at(c, i) * at(c, i);
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double LatticeField::max_distance(const ManifoldDescriptor& target) const {
  double best = 0.0;
  Vec v(ambient_dim_);
  for (std::size_t i = 0; i < node_count_; ++i) {
    for (int c = 0; c < ambient_dim_; ++c) v[c] = at(c, i);
    best = std::max(best, distance_to_manifold(target, v));
  }
  return best;
}

bool LatticeField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

namespace {
void check_compatible(const LatticeField& a, const LatticeField& b) {
  require(a.grid() == b.grid() && a.ambient_dim() == b.ambient_dim(), ErrorCode::InvalidArgument,
          "fields live on different grids or target dimensions");
}
}  // namespace

LatticeField& LatticeField::operator+=(const LatticeField& other) {
  check_compatible(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

LatticeField& LatticeField::operator-=(const LatticeField& other) {
  check_compatible(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

LatticeField& LatticeField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

LatticeField operator+(LatticeField a, const LatticeField& b) { return a += b; }
LatticeField operator-(LatticeField a, const LatticeField& b) { return a -= b; }
LatticeField operator*(double s, LatticeField a) { return a *= s; }

// ---------------------------------------------------------------------------
// FieldFamily

std::vector<double> FieldFamily::times() const {
  std::vector<double> t;
  t.reserve(slices.size());
  for (const auto& s : slices) t.push_back(s.time_label());
  return t;
}

int FieldFamily::find(double t) const {
  for (std::size_t i = 0; i < slices.size(); ++i) {
    const double ti = slices[i].time_label();
    if (std::abs(ti - t) <= 1e-12 * std::max(1.0, std::abs(t))) return static_cast<int>(i);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// SphericalData

SphericalData SphericalData::corotational(int dim, double angle) {
  return corotational(dim, angle, ManifoldDescriptor::unit_sphere(dim + 1));
}

SphericalData SphericalData::corotational(int dim, double angle, ManifoldDescriptor target) {
  require(dim == 2 || dim == 3, ErrorCode::ConfigError, "corotational data needs n in {2, 3}");
  require(std::isfinite(angle), ErrorCode::ConfigError, "corotational angle must be finite");
  target.validate();
  require(target.kind == ManifoldKind::UnitSphere && target.ambient_dim == dim + 1,
          ErrorCode::ConfigError, "corotational data maps into S^n in R^{n+1}");
  SphericalData d;
  d.kind_ = Kind::Corotational;
  d.dim_ = dim;
  d.angle_ = angle;
  d.target_ = target;
  return d;
}

SphericalData SphericalData::tabulated(int dim, ManifoldDescriptor target, Table table) {
  require(dim == 2 || dim == 3, ErrorCode::ConfigError, "tabulated data needs n in {2, 3}");
  target.validate();
  const std::size_t L = static_cast<std::size_t>(target.ambient_dim);
  require(table.n_theta >= 4 && table.n_phi >= 1, ErrorCode::ConfigError, "table too small");
  if (dim == 2) table.n_phi = 1;
  if (dim == 3) require(table.n_phi >= 4, ErrorCode::ConfigError, "azimuthal table too small");
  require(table.values.size() == L * table.n_theta * table.n_phi, ErrorCode::ConfigError,
          "table size does not match n_theta * n_phi * L");
  for (std::size_t s = 0; s * L < table.values.size(); ++s) {
    std::span<const double> v(table.values.data() + s * L, L);
    require(distance_to_manifold(target, v) <= 1e-6, ErrorCode::NotOnManifold,
            "tabulated sample is not on the target");
  }
  SphericalData d;
  d.kind_ = Kind::Tabulated;
  d.dim_ = dim;
  d.target_ = target;
  d.table_ = std::move(table);
  return d;
}

namespace {

// Cubic Lagrange weights for local coordinate t in [0, 3] on nodes 0..3.
void cubic_weights(double t, double* w) {
  w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

void SphericalData::evaluate(const double* omega, double* out) const {
  if (kind_ == Kind::Corotational) {
    const double s = std::sin(angle_);
    for (int a = 0; a < dim_; ++a) out[a] = s * omega[a];
    out[dim_] = std::cos(angle_);
    return;
  }
  const int L = target_.ambient_dim;
  for (int c = 0; c < L; ++c) out[c] = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim_ == 2) {
    double theta = std::atan2(omega[1], omega[0]);
    if (theta < 0) theta += two_pi;
    const double u = theta / two_pi * table_.n_theta;
    const int base = static_cast<int>(std::floor(u)) - 1;
    double w[4];
    cubic_weights(u - base, w);
    for (int k = 0; k < 4; ++k) {
      const double* v = table_.values.data() + static_cast<std::size_t>(wrap(base + k, table_.n_theta)) * L;
      for (int c = 0; c < L; ++c) out[c] += w[k] * v[c];
    }
  } else {
    const double theta = std::acos(std::clamp(omega[2], -1.0, 1.0));
    double phi = std::atan2(omega[1], omega[0]);
    if (phi < 0) phi += two_pi;
    const double ut = std::clamp(theta / std::numbers::pi * table_.n_theta - 0.5, 0.0,
                                 static_cast<double>(table_.n_theta - 1));
    const int bt = std::clamp(static_cast<int>(std::floor(ut)) - 1, 0, table_.n_theta - 4);
    const double up = phi / two_pi * table_.n_phi;
    const int bp = static_cast<int>(std::floor(up)) - 1;
    double wt[4];
    double wp[4];
    cubic_weights(ut - bt, wt);
    cubic_weights(up - bp, wp);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const std::size_t s = static_cast<std::size_t>(bt + i) * table_.n_phi + wrap(bp + j, table_.n_phi);
        const double* v = table_.values.data() + s * L;
        for (int c = 0; c < L; ++c) out[c] += wt[i] * wp[j] * v[c];
      }
    }
  }
  if (target_.kind == ManifoldKind::UnitSphere) {
    double r = 0.0;
    for (int c = 0; c < L; ++c) r += out[c] * out[c];
    r = std::sqrt(r);
    if (r > 0.0)
      for (int c = 0; c < L; ++c) out[c] /= r;
  }
}

Vec SphericalData::operator()(std::span<const double> omega) const {
  Vec out(target_.ambient_dim);
  evaluate(omega.data(), out.data());
  return out;
}

void SphericalData::evaluate_homogeneous(const double* x, double* out) const {
  double r = 0.0;
  for (int a = 0; a < dim_; ++a) r += x[a] * x[a];
  r = std::sqrt(r);
  double omega[3];
  for (int a = 0; a < dim_; ++a) omega[a] = x[a] / r;
  evaluate(omega, out);
}

double weak_gradient_norm(const SphericalData& data) {
  const int n = data.dim();
  const int L = data.target().ambient_dim;
  constexpr double eps = 1e-5;
  std::vector<double> plus(L), minus(L);
  auto diff_sq = [&](const double* a, const double* b) {
    double s = 0.0;
    for (int c = 0; c < L; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
    return s / (4.0 * eps * eps);
  };
  double integral = 0.0;
  if (n == 2) {
    constexpr int points = 512;
    for (int k = 0; k < points; ++k) {
      const double th = 2.0 * std::numbers::pi * k / points;
      const double wp[2] = {std::cos(th + eps), std::sin(th + eps)};
      const double wm[2] = {std::cos(th - eps), std::sin(th - eps)};
      data.evaluate(wp, plus.data());
      data.evaluate(wm, minus.data());
      integral += diff_sq(plus.data(), minus.data());
    }
    integral *= 2.0 * std::numbers::pi / points;
  } else {
    const auto polar = gauss_legendre(64, 0.0, std::numbers::pi);
    constexpr int azimuth = 128;
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
      const double th = polar.nodes[i];
      const double st = std::sin(th);
      for (int j = 0; j < azimuth; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / azimuth;
        auto omega = [](double a, double b, double* w) {
          w[0] = std::sin(a) * std::cos(b);
          w[1] = std::sin(a) * std::sin(b);
          w[2] = std::cos(a);
        };
        double wp[3], wm[3];
        omega(th + eps, ph, wp);
        omega(th - eps, ph, wm);
        data.evaluate(wp, plus.data());
        data.evaluate(wm, minus.data());
        const double d_th = diff_sq(plus.data(), minus.data());
        omega(th, ph + eps, wp);
        omega(th, ph - eps, wm);
        data.evaluate(wp, plus.data());
        data.evaluate(wm, minus.data());
        const double d_ph = diff_sq(plus.data(), minus.data()) / (st * st);
        integral += polar.weights[i] * st * std::pow(d_th + d_ph, 1.5);
      }
    }
    integral *= 2.0 * std::numbers::pi / azimuth;
  }
  return std::pow(integral / n, 1.0 / n);
}

LatticeField homogeneous_extend(const SphericalData& data, const GridSpec& grid) {
  grid.validate();
  require(grid.dim == data.dim(), ErrorCode::InvalidArgument, "grid and data dimensions differ");
  const int L = data.target().ambient_dim;
  LatticeField field(grid, L, 0.0);
  const std::size_t N = grid.node_count();
  const int mid = grid.center_index();
  std::array<int, 3> origin{mid, grid.dim > 1 ? mid : 0, grid.dim > 2 ? mid : 0};
  const std::size_t origin_node = grid.ravel(origin);
  double x[3];
  double v[16];
  for (std::size_t node = 0; node < N; ++node) {
    if (node == origin_node) continue;
    grid.position(node, x);
    data.evaluate_homogeneous(x, v);
    for (int c = 0; c < L; ++c) field.at(c, node) = v[c];
  }
  Vec avg(L, 0.0);
  for (int a = 0; a < grid.dim; ++a) {
    for (int sgn : {-1, 1}) {
      auto idx = origin;
      idx[a] += sgn;
      const std::size_t nb = grid.ravel(idx);
      for (int c = 0; c < L; ++c) avg[c] += field.at(c, nb) / (2.0 * grid.dim);
    }
  }
  const auto& target = data.target();
  if (target.kind == ManifoldKind::UnitSphere) {
    double r = 0.0;
    for (double c : avg) r += c * c;
    r = std::sqrt(r);
    if (r > 0.0)
      for (double& c : avg) c /= r;
  }
  field.set_value(origin_node, avg);
  return field;
}

// ---------------------------------------------------------------------------
// Finite differences

std::vector<double> FieldGradient::magnitude() const {
  const std::size_t N = grid.node_count();
  std::vector<double> mag(N, 0.0);
  const std::size_t rows = static_cast<std::size_t>(grid.dim) * ambient_dim;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* g = values.data() + r * N;
    for (std::size_t i = 0; i < N; ++i) mag[i] += g[i] * g[i];
  }
  for (double& m : mag) m = std::sqrt(m);
  return mag;
}

void FieldGradient::jacobian(std::size_t node, double* out) const {
  const std::size_t N = grid.node_count();
  const std::size_t rows = static_cast<std::size_t>(grid.dim) * ambient_dim;
  for (std::size_t r = 0; r < rows; ++r) out[r] = values[r * N + node];
}

namespace {

// d/dx along one axis of a strided line.
inline double first_derivative(const double* f, std::ptrdiff_t s, int i, int m, double inv_h) {
  if (i >= 2 && i <= m - 3)
    return (f[-2 * s] - 8.0 * f[-s] + 8.0 * f[s] - f[2 * s]) * (inv_h / 12.0);
  if (i == 0) return (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) * (0.5 * inv_h);
  if (i == m - 1) return (3.0 * f[0] - 4.0 * f[-s] + f[-2 * s]) * (0.5 * inv_h);
  return (f[s] - f[-s]) * (0.5 * inv_h);
}

inline double second_derivative(const double* f, std::ptrdiff_t s, int i, int m, double inv_h2) {
  if (i >= 2 && i <= m - 3)
    return (-f[-2 * s] + 16.0 * f[-s] - 30.0 * f[0] + 16.0 * f[s] - f[2 * s]) * (inv_h2 / 12.0);
  if (i == 0) return (2.0 * f[0] - 5.0 * f[s] + 4.0 * f[2 * s] - f[3 * s]) * inv_h2;
  if (i == m - 1) return (2.0 * f[0] - 5.0 * f[-s] + 4.0 * f[-2 * s] - f[-3 * s]) * inv_h2;
  return (f[-s] - 2.0 * f[0] + f[s]) * inv_h2;
}

}  // namespace

FieldGradient gradient(const LatticeField& field) {
  const GridSpec& grid = field.grid();
  require(grid.points_per_axis >= 5, ErrorCode::GridTooSmall,
          "finite-difference gradient needs at least 5 points per axis");
  const int L = field.ambient_dim();
  const int m = grid.points_per_axis;
  const std::size_t N = grid.node_count();
  FieldGradient g;
  g.grid = grid;
  g.ambient_dim = L;
  g.values.assign(N * grid.dim * L, 0.0);
  const double inv_h = 1.0 / grid.spacing();
  for (int a = 0; a < grid.dim; ++a) {
    const auto s = static_cast<std::ptrdiff_t>(grid.stride(a));
    for (int c = 0; c < L; ++c) {
      const double* f = field.component(c).data();
      double* out = g.values.data() + (static_cast<std::size_t>(a) * L + c) * N;
      for (std::size_t node = 0; node < N; ++node) {
        const int i = static_cast<int>((node / s) % m);
        out[node] = first_derivative(f + node, s, i, m, inv_h);
      }
    }
  }
  return g;
}

LatticeField laplacian(const LatticeField& field) {
  const GridSpec& grid = field.grid();
  require(grid.points_per_axis >= 5, ErrorCode::GridTooSmall,
          "finite-difference Laplacian needs at least 5 points per axis");
  const int L = field.ambient_dim();
  const int m = grid.points_per_axis;
  const std::size_t N = grid.node_count();
  LatticeField out(grid, L, field.time_label(), field.similarity_frame());
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  for (int a = 0; a < grid.dim; ++a) {
    const auto s = static_cast<std::ptrdiff_t>(grid.stride(a));
    for (int c = 0; c < L; ++c) {
      const double* f = field.component(c).data();
      double* o = out.component(c).data();
      for (std::size_t node = 0; node < N; ++node) {
        const int i = static_cast<int>((node / s) % m);
        o[node] += second_derivative(f + node, s, i, m, inv_h2);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation

void interpolate_into(const LatticeField& field, const double* x, double* out) {
  const GridSpec& grid = field.grid();
  const int m = grid.points_per_axis;
  const double h = grid.spacing();
  int base[3] = {0, 0, 0};
  double w[3][4];
  int taps = 4;
  if (m < 4) taps = m;
  for (int a = 0; a < grid.dim; ++a) {
    require(std::abs(x[a]) <= grid.half_width * (1.0 + 1e-12), ErrorCode::OutOfDomain,
            "interpolation point outside the grid");
    double u = (x[a] + grid.half_width) / h;
    const double r = std::round(u);
    if (std::abs(u - r) < 1e-9) u = r;
    u = std::clamp(u, 0.0, static_cast<double>(m - 1));
    base[a] = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, m - taps);
    cubic_weights(u - base[a], w[a]);
  }
  const int L = field.ambient_dim();
  for (int c = 0; c < L; ++c) out[c] = 0.0;
  const std::size_t N = grid.node_count();
  const double* data = field.data().data();
  if (grid.dim == 2) {
    for (int i = 0; i < 4; ++i) {
      if (w[0][i] == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        const double wij = w[0][i] * w[1][j];
        if (wij == 0.0) continue;
        const std::size_t node = static_cast<std::size_t>(base[0] + i) * m + (base[1] + j);
        for (int c = 0; c < L; ++c) out[c] += wij * data[c * N + node];
      }
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      if (w[0][i] == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        if (w[1][j] == 0.0) continue;
        for (int k = 0; k < 4; ++k) {
          const double wijk = w[0][i] * w[1][j] * w[2][k];
          if (wijk == 0.0) continue;
          const std::size_t node =
              (static_cast<std::size_t>(base[0] + i) * m + (base[1] + j)) * m + (base[2] + k);
          for (int c = 0; c < L; ++c) out[c] += wijk * data[c * N + node];
        }
      }
    }
  }
}

Vec interpolate(const LatticeField& field, std::span<const double> x) {
  require(static_cast<int>(x.size()) == field.grid().dim, ErrorCode::InvalidArgument,
          "interpolation point has the wrong dimension");
  Vec out(field.ambient_dim());
  interpolate_into(field, x.data(), out.data());
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kFieldMagic[8] = {'S', 'S', 'F', 'L', 'D', 'v', '1', '\0'};

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(static_cast<bool>(is), ErrorCode::IoError, "truncated field file");
  return v;
}

}  // namespace

void write_field_binary(const LatticeField& field, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::IoError, "cannot open " + path);
  os.write(kFieldMagic, sizeof(kFieldMagic));
  const auto& g = field.grid();
  put<std::int32_t>(os, g.dim);
  put<std::int32_t>(os, g.points_per_axis);
  put<double>(os, g.half_width);
  put<std::int32_t>(os, field.ambient_dim());
  put<double>(os, field.time_label());
  put<std::int32_t>(os, field.similarity_frame() ? 1 : 0);
  const std::size_t N = field.node_count();
  const int L = field.ambient_dim();
  std::vector<double> row(L);
  for (std::size_t i = 0; i < N; ++i) {
    for (int c = 0; c < L; ++c) row[c] = field.at(c, i);
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(L * sizeof(double)));
  }
  require(static_cast<bool>(os), ErrorCode::IoError, "write failed for " + path);
}

LatticeField read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::IoError, "cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  require(static_cast<bool>(is) && std::memcmp(magic, kFieldMagic, sizeof(magic)) == 0,
          ErrorCode::SchemaMismatch, path + " is not a field dump");
  GridSpec g;
  g.dim = get<std::int32_t>(is);
  g.points_per_axis = get<std::int32_t>(is);
  g.half_width = get<double>(is);
  const int L = get<std::int32_t>(is);
  const double t = get<double>(is);
  const bool sim = get<std::int32_t>(is) != 0;
  LatticeField field(g, L, t, sim);
  const std::size_t N = field.node_count();
  std::vector<double> row(L);
  for (std::size_t i = 0; i < N; ++i) {
    is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(L * sizeof(double)));
    require(static_cast<bool>(is), ErrorCode::IoError, "truncated field file " + path);
    for (int c = 0; c < L; ++c) field.at(c, i) = row[c];
  }
  return field;
}

void write_field_csv(const LatticeField& field, const std::string& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), ErrorCode::IoError, "cannot open " + path);
  const auto& g = field.grid();
  const int L = field.ambient_dim();
  os << "n,m,R_max,L,time_label\n";
  os << std::setprecision(17) << g.dim << ',' << g.points_per_axis << ',' << g.half_width << ','
     << L << ',' << field.time_label() << '\n';
  for (int c = 0; c < L; ++c) os << (c ? "," : "") << 'v' << c;
  os << '\n';
  for (std::size_t i = 0; i < field.node_count(); ++i) {
    for (int c = 0; c < L; ++c) os << (c ? "," : "") << field.at(c, i);
    os << '\n';
  }
}

}  // namespace ssflow
