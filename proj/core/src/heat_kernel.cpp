#include "ssflow/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssflow/errors.hpp"
#include "ssflow/norms.hpp"
#include "ssflow/parallel.hpp"
#include "ssflow/quadrature.hpp"
#include "tensor_ops.hpp"

namespace ssflow {

// ---------------------------------------------------------------------------
// HeatOperator

HeatOperator::HeatOperator(GridSpec grid, double t, double truncation_factor)
    : grid_(grid), t_(t), truncation_(truncation_factor * std::sqrt(t)) {
  grid_.validate();
  require(t > 0.0, ErrorCode::InvalidArgument, "heat operator needs t > 0");
  require(truncation_factor >= 6.0, ErrorCode::InvalidArgument,
          "Gaussian truncation must be at least 6 sqrt(t)");
  const double h = grid_.spacing();
  half_taps_ = static_cast<int>(std::ceil(truncation_ / h));
  weights_.resize(2 * half_taps_ + 1);
  double sum = 0.0;
  for (int j = -half_taps_; j <= half_taps_; ++j) {
    const double x = j * h;
    const double w = std::exp(-x * x / (4.0 * t));
    weights_[j + half_taps_] = w;
    sum += w;
  }
  for (double& w : weights_) w /= sum;
}

namespace {

detail::DenseMatrix banded_matrix(int out_len, int in_len, int offset, const std::vector<double>& w,
                                  int half_taps) {
  detail::DenseMatrix mat(out_len, in_len);
  for (int i = 0; i < out_len; ++i) {
    const int centre = i + offset;
    const int lo = std::max(0, centre - half_taps);
    const int hi = std::min(in_len - 1, centre + half_taps);
    for (int j = lo; j <= hi; ++j) mat(i, j) = w[j - centre + half_taps];
  }
  return mat;
}

}  // namespace

LatticeField HeatOperator::apply(const LatticeField& field) const {
  require(field.grid() == grid_, ErrorCode::InvalidArgument, "field is on a different grid");
  const int m = grid_.points_per_axis;
  const auto mat = banded_matrix(m, m, 0, weights_, half_taps_);
  LatticeField out(grid_, field.ambient_dim(), field.time_label(), field.similarity_frame());
  std::vector<double> scratch;
  for (int c = 0; c < field.ambient_dim(); ++c)
    detail::apply_tensor(field.component(c).data(), out.component(c).data(), grid_.dim, mat,
                         scratch);
  return out;
}

LatticeField HeatOperator::apply(const LatticeField& field, const FarFieldFn& far_field) const {
  require(field.grid() == grid_, ErrorCode::InvalidArgument, "field is on a different grid");
  const int m = grid_.points_per_axis;
  const int K = half_taps_;
  const int mp = m + 2 * K;
  const int n = grid_.dim;
  const int L = field.ambient_dim();
  const double h = grid_.spacing();
  std::size_t padded_count = 1;
  for (int a = 0; a < n; ++a) padded_count *= static_cast<std::size_t>(mp);

  std::vector<std::vector<double>> padded(L, std::vector<double>(padded_count));
  parallel_for(padded_count, [&](std::size_t p) {
    int idx[3] = {0, 0, 0};
    std::size_t rest = p;
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(rest % mp);
      rest /= mp;
    }
    bool inside = true;
    std::array<int, 3> inner{0, 0, 0};
    double x[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) {
      inner[a] = idx[a] - K;
      inside = inside && inner[a] >= 0 && inner[a] < m;
      x[a] = -grid_.half_width + inner[a] * h;
    }
    if (inside) {
      const std::size_t node = grid_.ravel(inner);
      for (int c = 0; c < L; ++c) padded[c][p] = field.at(c, node);
    } else {
      double v[16];
      far_field(x, v);
      for (int c = 0; c < L; ++c) padded[c][p] = v[c];
    }
  });

  const auto mat = banded_matrix(m, mp, K, weights_, K);
  LatticeField out(grid_, L, field.time_label(), field.similarity_frame());
  std::vector<double> scratch;
  for (int c = 0; c < L; ++c)
    detail::apply_tensor(padded[c].data(), out.component(c).data(), n, mat, scratch);
  return out;
}

// ---------------------------------------------------------------------------
// CaloricExtension

CaloricExtension::CaloricExtension(SphericalData data, CaloricOptions options)
    : data_(std::move(data)), options_(options) {
  require(options_.theta_points >= 4, ErrorCode::InvalidArgument, "too few angular points");
  require(options_.window > 0.0, ErrorCode::InvalidArgument, "angular window must be positive");
  phi_points_ = options_.phi_points;
  if (phi_points_ <= 0) phi_points_ = data_.kind() == SphericalData::Kind::Corotational ? 4 : 32;
  const auto rule = gauss_legendre(options_.theta_points, -1.0, 1.0);
  unit_nodes_ = rule.nodes;
  unit_weights_ = rule.weights;
}

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Radial factor pi^{-n/2} exp(-q^2 sin^2 theta) P_n(q cos theta), where the
// radial integral of the heat kernel along the ray omega has been done in
// closed form with r = b + 2 sqrt(t) xi.
double radial_factor(int n, double q, double cos_t) {
  const double beta = q * cos_t;
  const double sin2 = std::max(0.0, 1.0 - cos_t * cos_t);
  const double e = std::exp(-q * q * sin2);
  const double j0 = 0.5 * kSqrtPi * std::erfc(-beta);
  const double eq = std::exp(-q * q);
  if (n == 2) return (e * beta * j0 + 0.5 * eq) / std::numbers::pi;
  return (e * (beta * beta + 0.5) * j0 + 0.5 * beta * eq) / (std::numbers::pi * kSqrtPi);
}

}  // namespace

void CaloricExtension::evaluate(const double* x, double t, double* out) const {
  require(t > 0.0, ErrorCode::InvalidArgument, "caloric extension needs t > 0");
  const int n = data_.dim();
  const int L = ambient_dim();
  double r = 0.0;
  for (int a = 0; a < n; ++a) r += x[a] * x[a];
  r = std::sqrt(r);
  const double q = r / (2.0 * std::sqrt(t));

  double e1[3] = {1.0, 0.0, 0.0};
  if (r > 0.0)
    for (int a = 0; a < n; ++a) e1[a] = x[a] / r;
  const double theta_w =
      q <= options_.window ? std::numbers::pi : std::asin(options_.window / q);

  double acc[16] = {};
  double norm = 0.0;
  double omega[3];
  double value[16];
  if (n == 2) {
    const double e2[2] = {-e1[1], e1[0]};
    for (std::size_t k = 0; k < unit_nodes_.size(); ++k) {
      const double theta = theta_w * unit_nodes_[k];
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double w = theta_w * unit_weights_[k] * radial_factor(2, q, c);
      omega[0] = c * e1[0] + s * e2[0];
      omega[1] = c * e1[1] + s * e2[1];
      data_.evaluate(omega, value);
      for (int comp = 0; comp < L; ++comp) acc[comp] += w * value[comp];
      norm += w;
    }
  } else {
    // Orthonormal frame (e1, e2, e3) with e1 = x / |x|.
    double e2[3];
    const int pivot = std::abs(e1[0]) < 0.9 ? 0 : 1;
    double ref[3] = {0.0, 0.0, 0.0};
    ref[pivot] = 1.0;
    const double d = ref[0] * e1[0] + ref[1] * e1[1] + ref[2] * e1[2];
    for (int a = 0; a < 3; ++a) e2[a] = ref[a] - d * e1[a];
    const double n2 = std::sqrt(e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2]);
    for (double& v : e2) v /= n2;
    const double e3[3] = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                          e1[0] * e2[1] - e1[1] * e2[0]};
    const double half = 0.5 * theta_w;
    const double dphi = 2.0 * std::numbers::pi / phi_points_;
    for (std::size_t k = 0; k < unit_nodes_.size(); ++k) {
      const double theta = half * (unit_nodes_[k] + 1.0);
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double w = half * unit_weights_[k] * s * radial_factor(3, q, c) * dphi;
      for (int j = 0; j < phi_points_; ++j) {
        const double phi = j * dphi;
        const double cp = std::cos(phi);
        const double sp = std::sin(phi);
        for (int a = 0; a < 3; ++a) omega[a] = c * e1[a] + s * (cp * e2[a] + sp * e3[a]);
        data_.evaluate(omega, value);
        for (int comp = 0; comp < L; ++comp) acc[comp] += w * value[comp];
        norm += w;
      }
    }
  }
  for (int comp = 0; comp < L; ++comp) out[comp] = acc[comp] / norm;
}

Vec CaloricExtension::operator()(std::span<const double> x, double t) const {
  require(static_cast<int>(x.size()) == dim(), ErrorCode::InvalidArgument,
          "point has the wrong dimension");
  Vec out(ambient_dim());
  evaluate(x.data(), t, out.data());
  return out;
}

LatticeField CaloricExtension::slice(const GridSpec& grid, double t) const {
  grid.validate();
  require(grid.dim == dim(), ErrorCode::InvalidArgument, "grid and data dimensions differ");
  const int L = ambient_dim();
  LatticeField field(grid, L, t);
  parallel_for(grid.node_count(), [&](std::size_t node) {
    double x[3];
    double v[16];
    grid.position(node, x);
    evaluate(x, t, v);
    for (int c = 0; c < L; ++c) field.at(c, node) = v[c];
  });
  return field;
}

LatticeField caloric_extension_slice(const SphericalData& data, const GridSpec& grid) {
  LatticeField field = CaloricExtension(data).slice(grid, 1.0);
  field.set_similarity_frame(true);
  return field;
}

// ---------------------------------------------------------------------------
// Semigroup report

double SemigroupReport::max_weak_ratio() const {
  double best = 0.0;
  for (const auto& r : rows) best = std::max(best, r.weak_ratio);
  return best;
}

namespace {

double spread(const std::vector<SemigroupRow>& rows, double SemigroupRow::*member) {
  if (rows.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.*member);
    hi = std::max(hi, r.*member);
  }
  if (hi == 0.0) return 0.0;
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

double SemigroupReport::l2n_spread() const { return spread(rows, &SemigroupRow::l2n_scaled); }
double SemigroupReport::lp_spread() const { return spread(rows, &SemigroupRow::lp_scaled); }

SemigroupReport semigroup_estimate_report(const SphericalData& data, const GridSpec& grid,
                                          std::span<const double> times, double p) {
  const int n = grid.dim;
  require(p >= n, ErrorCode::InvalidArgument, "semigroup report needs p >= n");
  SemigroupReport report;
  report.dim = n;
  report.p = p;
  report.weak_u0 = weak_gradient_norm(data);
  const CaloricExtension caloric(data);
  for (double t : times) {
    require(t > 0.0, ErrorCode::InvalidArgument, "semigroup report times must be positive");
    GridSpec scaled = grid;
    scaled.half_width = grid.half_width * std::sqrt(t);
    const auto slice = caloric.slice(scaled, t);
    const auto g = gradient(slice).magnitude();
    SemigroupRow row;
    row.t = t;
    if (report.weak_u0 > 0.0) {
      const double inv = 1.0 / report.weak_u0;
      row.weak_ratio = weak_lp_norm(g, scaled, n) * inv;
      row.l2n_scaled = std::pow(t, 0.25) * lp_norm(g, scaled, 2.0 * n) * inv;
      const double expo = std::isinf(p) ? 0.5 : 0.5 * n * (1.0 / n - 1.0 / p);
      row.lp_scaled = std::pow(t, expo) * lp_norm(g, scaled, p) * inv;
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace ssflow
