#include "ssflow/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssflow/errors.hpp"
#include "ssflow/norms.hpp"
#include "ssflow/parallel.hpp"
#include "ssflow/quadrature.hpp"
#include "tensor_ops.hpp"

namespace ssflow {

std::string_view to_string(IterationMode mode) {
  return mode == IterationMode::SimilarityFrame ? "similarity" : "spacetime";
}

IterationMode iteration_mode_from_string(std::string_view name) {
  if (name == "similarity" || name == "similarity_frame") return IterationMode::SimilarityFrame;
  if (name == "spacetime" || name == "space_time") return IterationMode::SpaceTime;
  fail(ErrorCode::ConfigError, "unknown iteration mode '" + std::string(name) + "'");
}

std::string_view to_string(IterationStatus status) {
  switch (status) {
    case IterationStatus::Converged:
      return "converged";
    case IterationStatus::MaxIter:
      return "max_iter";
    case IterationStatus::LeftBall:
      return "left_ball";
    case IterationStatus::LeftTube:
      return "left_tube";
  }
  return "unknown";
}

std::vector<double> TimeSchedule::times() const {
  validate();
  const double lr = std::log(ratio);
  const auto k_lo = static_cast<long>(std::ceil(std::log(t_min) / lr - 1e-9));
  const auto k_hi = static_cast<long>(std::floor(std::log(t_max) / lr + 1e-9));
  std::vector<double> t;
  for (long k = k_lo; k <= k_hi; ++k) t.push_back(std::exp(static_cast<double>(k) * lr));
  return t;
}

void TimeSchedule::validate() const {
  require(t_min > 0.0 && t_max > t_min, ErrorCode::ConfigError, "schedule needs 0 < t_min < t_max");
  require(ratio > 1.0, ErrorCode::ConfigError, "schedule ratio must exceed 1");
}

void IterationConfig::validate(const ManifoldDescriptor& target) const {
  require(delta > 0.0, ErrorCode::ConfigError, "delta must be positive");
  require(delta < target.tube_radius, ErrorCode::ConfigError,
          "delta must be smaller than the tube radius");
  require(max_iter >= 1, ErrorCode::ConfigError, "max_iter must be at least 1");
  require(tol_fix > 0.0, ErrorCode::ConfigError, "tol_fix must be positive");
  require(quad_panels >= 2, ErrorCode::ConfigError, "quad_panels must be at least 2");
  require(source_cap > 0.0, ErrorCode::ConfigError, "source_cap must be positive");
  require(caloric.theta_points >= 4 && caloric.phi_points >= 0 && caloric.window > 0.0,
          ErrorCode::ConfigError, "caloric quadrature settings out of range");
  schedule.validate();
  if (mode == IterationMode::SpaceTime)
    require(schedule.times().size() >= 4, ErrorCode::ConfigError,
            "space-time mode needs at least 4 schedule times");
}

// ---------------------------------------------------------------------------
// Family helpers

FieldFamily family_difference(const FieldFamily& a, const FieldFamily& b) {
  require(a.slices.size() == b.slices.size(), ErrorCode::InvalidArgument,
          "families have different slice counts");
  FieldFamily d;
  for (std::size_t k = 0; k < a.slices.size(); ++k) {
    require(a.slices[k].time_label() == b.slices[k].time_label(), ErrorCode::InvalidArgument,
            "families have different slice times");
    d.slices.push_back(a.slices[k] - b.slices[k]);
  }
  return d;
}

double family_sup_norm(const FieldFamily& a) {
  double best = 0.0;
  for (const auto& s : a.slices) best = std::max(best, s.sup_norm());
  return best;
}

namespace {

LatticeField source_field(const LatticeField& u, const ManifoldDescriptor& target, double cap) {
  const GridSpec& grid = u.grid();
  const int n = grid.dim;
  const int L = u.ambient_dim();
  LatticeField out(grid, L, u.time_label(), u.similarity_frame());
  if (target.kind == ManifoldKind::Euclidean) return out;
  const FieldGradient g = gradient(u);
  const std::size_t N = grid.node_count();
  parallel_for(N, [&](std::size_t node) {
    double y[16];
    double rows[48];
    double res[16];
    for (int c = 0; c < L; ++c) y[c] = u.at(c, node);
    g.jacobian(node, rows);
    extended_form_trace(target, y, rows, n, res);
    for (int c = 0; c < L; ++c) out.at(c, node) = res[c];
  });
  const double sup = out.sup_norm();
  require(std::isfinite(sup) && sup <= cap, ErrorCode::SourceUnbounded,
          "Duhamel source exceeds the configured cap");
  return out;
}

double slice_distance(const LatticeField& u, const ManifoldDescriptor& target) {
  return u.max_distance(target);
}

// 1D matrix of int k_{tau}(y_i - a w) phi_j(w) dw for the hat basis phi_j on
// the lattice axis, tau = 1 - s, a = sqrt(s).
detail::DenseMatrix similarity_matrix(const GridSpec& grid, double a, double tau) {
  const int m = grid.points_per_axis;
  const double h = grid.spacing();
  const double H = a * h;
  const double st = std::sqrt(tau);
  const double inv = 1.0 / (2.0 * st);
  const bool series = H * inv < 0.01;
  const double norm = 1.0 / (2.0 * std::sqrt(std::numbers::pi * tau));
  detail::DenseMatrix mat(m, m);
  std::vector<double> z(m);
  std::vector<double> phi2(m);
  std::vector<double> phi1(m);
  for (int i = 0; i < m; ++i) {
    const double y = grid.coord(i);
    for (int k = 0; k < m; ++k) z[k] = (a * grid.coord(k) - y) * inv;
    if (series) {
      for (int j = 0; j < m; ++j) {
        const double zz = z[j];
        if (std::abs(zz) > 9.0) continue;
        const double g = norm * std::exp(-zz * zz);
        const double d = zz / st;  // (u - y) / (2 tau)
        const double g1 = -d * g;
        const double g2 = (d * d - 0.5 / tau) * g;
        double v;
        if (j == 0)
          v = h * (0.5 * g + H * g1 / 6.0 + H * H * g2 / 24.0);
        else if (j == m - 1)
          v = h * (0.5 * g - H * g1 / 6.0 + H * H * g2 / 24.0);
        else
          v = h * (g + H * H * g2 / 12.0);
        mat(i, j) = v;
      }
      continue;
    }
    for (int k = 0; k < m; ++k) {
      const double zz = z[k];
      const double e = std::erf(zz);
      phi1[k] = 0.5 * e;
      phi2[k] = st * (zz * e + std::exp(-zz * zz) / std::sqrt(std::numbers::pi));
    }
    const double scale = 1.0 / (a * H);
    for (int j = 0; j < m; ++j) {
      const int lo = std::max(0, j - 1);
      const int hi = std::min(m - 1, j + 1);
      if (z[hi] < -9.0 || z[lo] > 9.0) continue;
      double v;
      if (j == 0)
        v = ((phi2[1] - phi2[0]) / H - phi1[0]) / a;
      else if (j == m - 1)
        v = (phi1[m - 1] - (phi2[m - 1] - phi2[m - 2]) / H) / a;
      else
        v = (phi2[j + 1] - 2.0 * phi2[j] + phi2[j - 1]) * scale;
      mat(i, j) = v;
    }
  }
  return mat;
}

struct TimeNode {
  double s = 0.0;
  double weight = 0.0;
};

// Gauss-Legendre nodes for int_lo^hi f(s) ds in the variable r = sqrt(s - lo)
// (from_left) or r = sqrt(hi - s).
std::vector<TimeNode> sqrt_substituted_nodes(double lo, double hi, int panels, bool from_left) {
  const auto rule = composite_gauss_legendre(panels, 2, 0.0, std::sqrt(hi - lo));
  std::vector<TimeNode> nodes;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double r = rule.nodes[k];
    TimeNode node;
    node.s = from_left ? lo + r * r : hi - r * r;
    node.weight = 2.0 * r * rule.weights[k];
    nodes.push_back(node);
  }
  return nodes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Solver state

struct DuhamelSolver::Impl {
  SphericalData data;
  GridSpec grid;
  IterationConfig config;
  CaloricExtension caloric_ext;
  FieldFamily caloric;

  // Similarity frame: per time node, the 1D matrix and the total weight.
  std::vector<detail::DenseMatrix> sim_matrices;
  std::vector<double> sim_weights;

  // Space-time: per interval, the quadrature nodes and u0_hat at each node.
  std::vector<double> times;  // t_0 = 0, t_1..t_J
  std::vector<std::vector<TimeNode>> step_nodes;
  std::vector<std::vector<LatticeField>> step_caloric;

  Impl(SphericalData d, GridSpec g, IterationConfig c)
      : data(std::move(d)), grid(g), config(c), caloric_ext(data, c.caloric) {}

  const ManifoldDescriptor& target() const { return data.target(); }

  void build_similarity();
  void build_spacetime();
  FieldFamily apply_similarity(const FieldFamily& v) const;
  FieldFamily apply_spacetime(const FieldFamily& v) const;
  LatticeField interpolate_v(const FieldFamily& v, double s) const;
};

void DuhamelSolver::Impl::build_similarity() {
  const int n = grid.dim;
  const int half = std::max(1, config.quad_panels / 2);
  const double mid = 0.5;
  std::vector<TimeNode> nodes = sqrt_substituted_nodes(0.0, mid, half, true);
  const auto right = sqrt_substituted_nodes(mid, 1.0, half, false);
  nodes.insert(nodes.end(), right.begin(), right.end());
  sim_matrices.resize(nodes.size());
  sim_weights.resize(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t q) {
    const double s = nodes[q].s;
    sim_matrices[q] = similarity_matrix(grid, std::sqrt(s), 1.0 - s);
    sim_weights[q] = nodes[q].weight * std::pow(s, 0.5 * n - 1.0);
  });
  LatticeField slice = caloric_ext.slice(grid, 1.0);
  slice.set_similarity_frame(true);
  caloric.slices.push_back(std::move(slice));
}

void DuhamelSolver::Impl::build_spacetime() {
  times.push_back(0.0);
  for (double t : config.schedule.times()) times.push_back(t);
  const int per_step = std::max(1, config.quad_panels / 24);
  caloric.slices.push_back(homogeneous_extend(data, grid));
  for (std::size_t j = 1; j < times.size(); ++j) caloric.slices.push_back(caloric_ext.slice(grid, times[j]));
  step_nodes.resize(times.size() - 1);
  step_caloric.resize(times.size() - 1);
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    step_nodes[j] = sqrt_substituted_nodes(times[j], times[j + 1], per_step, j == 0);
    for (const auto& node : step_nodes[j]) step_caloric[j].push_back(caloric_ext.slice(grid, node.s));
  }
}

FieldFamily DuhamelSolver::Impl::apply_similarity(const FieldFamily& v) const {
  require(v.slices.size() == 2 && v.slices[1].grid() == grid, ErrorCode::InvalidArgument,
          "similarity-frame family must hold the slices t = 0 and t = 1");
  const int n = grid.dim;
  const int L = target().ambient_dim;
  LatticeField u = caloric.slices[0] + v.slices[1];
  const LatticeField G = source_field(u, target(), config.source_cap);
  LatticeField out(grid, L, 1.0, true);
  if (target().kind != ManifoldKind::Euclidean) {
    parallel_for(static_cast<std::size_t>(L), [&](std::size_t c) {
      std::vector<double> scratch;
      std::vector<double> tmp(grid.node_count());
      const double* src = G.component(static_cast<int>(c)).data();
      double* dst = out.component(static_cast<int>(c)).data();
      for (std::size_t q = 0; q < sim_matrices.size(); ++q) {
        detail::apply_tensor(src, tmp.data(), n, sim_matrices[q], scratch);
        const double w = sim_weights[q];
        for (std::size_t i = 0; i < tmp.size(); ++i) dst[i] += w * tmp[i];
      }
    });
  }
  FieldFamily result;
  result.slices.emplace_back(grid, L, 0.0);
  result.slices.push_back(std::move(out));
  return result;
}

LatticeField DuhamelSolver::Impl::interpolate_v(const FieldFamily& v, double s) const {
  const std::size_t J = times.size() - 1;
  if (s <= times[1]) {
    LatticeField f = v.slices[1];
    f.set_time_label(s);
    return f;
  }
  std::size_t j = 1;
  while (j + 1 <= J && times[j + 1] < s) ++j;
  // s lies in (t_j, t_{j+1}]; stencil of four positive slices around it.
  const std::size_t base = std::clamp<std::size_t>(j > 1 ? j - 1 : 1, 1, J - 3);
  double w[4];
  const double x = std::log(s);
  for (int a = 0; a < 4; ++a) {
    double num = 1.0;
    double den = 1.0;
    const double xa = std::log(times[base + a]);
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      const double xb = std::log(times[base + b]);
      num *= x - xb;
      den *= xa - xb;
    }
    w[a] = num / den;
  }
  LatticeField f(grid, v.slices[1].ambient_dim(), s);
  auto& out = f.data();
  for (int a = 0; a < 4; ++a) {
    const auto& src = v.slices[base + a].data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[a] * src[i];
  }
  return f;
}

FieldFamily DuhamelSolver::Impl::apply_spacetime(const FieldFamily& v) const {
  require(v.slices.size() == times.size(), ErrorCode::InvalidArgument,
          "space-time family does not match the schedule");
  const int L = target().ambient_dim;
  FieldFamily result;
  result.slices.emplace_back(grid, L, 0.0);
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    const double t_next = times[j + 1];
    LatticeField w(grid, L, t_next);
    if (j > 0) {
      w = HeatOperator(grid, t_next - times[j]).apply(result.slices[j]);
      w.set_time_label(t_next);
    }
    if (target().kind != ManifoldKind::Euclidean) {
      for (std::size_t q = 0; q < step_nodes[j].size(); ++q) {
        const auto& node = step_nodes[j][q];
        const LatticeField u = step_caloric[j][q] + interpolate_v(v, node.s);
        LatticeField F = source_field(u, target(), config.source_cap);
        const double lag = t_next - node.s;
        if (lag > 0.0) F = HeatOperator(grid, lag).apply(F);
        F *= node.weight;
        w += F;
      }
    }
    result.slices.push_back(std::move(w));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Public interface

DuhamelSolver::DuhamelSolver(SphericalData data, GridSpec grid, IterationConfig config)
    : impl_(std::make_unique<Impl>(std::move(data), grid, config)) {
  impl_->grid.validate();
  require(impl_->grid.dim == impl_->data.dim(), ErrorCode::ConfigError,
          "grid dimension differs from the data dimension");
  require(impl_->grid.points_per_axis >= 5, ErrorCode::GridTooSmall,
          "Duhamel solver needs at least 5 points per axis");
  impl_->config.validate(impl_->target());
  if (config.mode == IterationMode::SimilarityFrame)
    impl_->build_similarity();
  else
    impl_->build_spacetime();
}

DuhamelSolver::~DuhamelSolver() = default;
DuhamelSolver::DuhamelSolver(DuhamelSolver&&) noexcept = default;
DuhamelSolver& DuhamelSolver::operator=(DuhamelSolver&&) noexcept = default;

const SphericalData& DuhamelSolver::data() const { return impl_->data; }
const GridSpec& DuhamelSolver::grid() const { return impl_->grid; }
const IterationConfig& DuhamelSolver::config() const { return impl_->config; }
const ManifoldDescriptor& DuhamelSolver::target() const { return impl_->target(); }
const FieldFamily& DuhamelSolver::caloric() const { return impl_->caloric; }
const CaloricExtension& DuhamelSolver::caloric_extension() const { return impl_->caloric_ext; }

FieldFamily DuhamelSolver::zero() const {
  const int L = target().ambient_dim;
  FieldFamily z;
  z.slices.emplace_back(impl_->grid, L, 0.0);
  if (impl_->config.mode == IterationMode::SimilarityFrame) {
    z.slices.emplace_back(impl_->grid, L, 1.0, true);
  } else {
    for (std::size_t j = 1; j < impl_->times.size(); ++j)
      z.slices.emplace_back(impl_->grid, L, impl_->times[j]);
  }
  return z;
}

FieldFamily DuhamelSolver::assemble(const FieldFamily& v) const {
  FieldFamily u;
  if (impl_->config.mode == IterationMode::SimilarityFrame) {
    u.slices.push_back(homogeneous_extend(impl_->data, impl_->grid));
    u.slices.push_back(impl_->caloric.slices[0] + v.slices.at(1));
  } else {
    u.slices.push_back(impl_->caloric.slices[0]);
    for (std::size_t j = 1; j < impl_->caloric.slices.size(); ++j)
      u.slices.push_back(impl_->caloric.slices[j] + v.slices.at(j));
  }
  return u;
}

double DuhamelSolver::data_gradient_weak_norm() const {
  return weak_gradient_norm(impl_->data);
}

double DuhamelSolver::distance_to_target(const FieldFamily& v) const {
  double best = 0.0;
  if (impl_->config.mode == IterationMode::SimilarityFrame) {
    best = slice_distance(impl_->caloric.slices[0] + v.slices.at(1), target());
  } else {
    for (std::size_t j = 1; j < impl_->caloric.slices.size(); ++j)
      best = std::max(best, slice_distance(impl_->caloric.slices[j] + v.slices.at(j), target()));
  }
  return best;
}

FieldFamily DuhamelSolver::apply(const FieldFamily& v) const {
  return impl_->config.mode == IterationMode::SimilarityFrame ? impl_->apply_similarity(v)
                                                               : impl_->apply_spacetime(v);
}

PicardResult DuhamelSolver::picard_iterate() const {
  const auto& cfg = impl_->config;
  PicardResult result;
  FieldFamily v = zero();
  double prev_inc = 0.0;
  result.trace.status = IterationStatus::MaxIter;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    FieldFamily next = apply(v);
    const FieldFamily diff = family_difference(next, v);
    TraceRecord rec;
    rec.k = k;
    rec.x_norm = x_norm(next);
    rec.increment = x_norm(diff);
    rec.residual = family_sup_norm(diff);
    rec.dist_n = distance_to_target(next);
    if (k >= 2 && prev_inc > 0.0) rec.theta = rec.increment / prev_inc;
    prev_inc = rec.increment;
    result.trace.records.push_back(rec);
    v = std::move(next);
    if (!(rec.dist_n < target().tube_radius)) {
      result.trace.status = IterationStatus::LeftTube;
      break;
    }
    if (rec.x_norm > cfg.delta) {
      result.trace.status = IterationStatus::LeftBall;
      break;
    }
    if (rec.increment <= cfg.tol_fix) {
      result.trace.status = IterationStatus::Converged;
      break;
    }
  }
  result.u = assemble(v);
  if (result.trace.status == IterationStatus::Converged) {
    double defect = 0.0;
    for (std::size_t j = 1; j < result.u.slices.size(); ++j) {
      const auto& s = result.u.slices[j];
      Vec y(s.ambient_dim());
      for (std::size_t node = 0; node < s.node_count(); ++node) {
        for (int c = 0; c < s.ambient_dim(); ++c) y[c] = s.at(c, node);
        const Vec p = project(target(), y);
        double d = 0.0;
        for (int c = 0; c < s.ambient_dim(); ++c) d += (y[c] - p[c]) * (y[c] - p[c]);
        defect = std::max(defect, std::sqrt(d));
      }
    }
    result.trace.projection_defect = defect;
  }
  result.v = std::move(v);
  return result;
}

namespace {

struct Bump {
  double center[3] = {0.0, 0.0, 0.0};
  double width = 1.0;
  double amplitude = 1.0;
  double direction[16] = {};
};

std::vector<Bump> draw_bumps(SeededRng& rng, int n, int L, int count) {
  std::vector<Bump> bumps(count);
  for (auto& b : bumps) {
    double r2;
    do {
      r2 = 0.0;
      for (int a = 0; a < n; ++a) {
        b.center[a] = rng.uniform(-3.0, 3.0);
        r2 += b.center[a] * b.center[a];
      }
    } while (r2 > 9.0);
    b.width = rng.uniform(0.7, 1.5);
    b.amplitude = rng.uniform(0.5, 1.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    double norm;
    do {
      norm = 0.0;
      for (int c = 0; c < L; ++c) {
        b.direction[c] = rng.uniform(-1.0, 1.0);
        norm += b.direction[c] * b.direction[c];
      }
    } while (norm < 0.01 || norm > 1.0);
    norm = std::sqrt(norm);
    for (int c = 0; c < L; ++c) b.direction[c] /= norm;
  }
  return bumps;
}

LatticeField bump_slice(const std::vector<Bump>& bumps, const GridSpec& grid, int L, double t,
                        bool similarity) {
  LatticeField f(grid, L, t, similarity);
  const double scale = 1.0 / std::sqrt(t);
  double x[3];
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    grid.position(node, x);
    for (const auto& b : bumps) {
      double r2 = 0.0;
      for (int a = 0; a < grid.dim; ++a) {
        const double d = x[a] * scale - b.center[a];
        r2 += d * d;
      }
      const double e = b.amplitude * std::exp(-0.5 * r2 / (b.width * b.width));
      for (int c = 0; c < L; ++c) f.at(c, node) += e * b.direction[c];
    }
  }
  return f;
}

}  // namespace

ProbeResult DuhamelSolver::contraction_probe(int pairs, std::uint64_t seed) const {
  require(pairs >= 1, ErrorCode::InvalidArgument, "contraction probe needs at least one pair");
  const auto& cfg = impl_->config;
  const int n = impl_->grid.dim;
  const int L = target().ambient_dim;
  SeededRng rng(seed);
  const FieldFamily z = zero();
  auto draw = [&]() {
    const auto bumps = draw_bumps(rng, n, L, 3);
    const double fraction = rng.uniform(0.3, 0.95);
    FieldFamily f;
    f.slices.emplace_back(impl_->grid, L, 0.0);
    for (std::size_t k = 1; k < z.slices.size(); ++k) {
      const double t = z.slices[k].time_label();
      f.slices.push_back(bump_slice(bumps, impl_->grid, L, t, z.slices[k].similarity_frame()));
    }
    const double norm = x_norm(f);
    for (auto& s : f.slices) s *= cfg.delta * fraction / norm;
    return f;
  };
  ProbeResult result;
  for (int p = 0; p < pairs; ++p) {
    const FieldFamily v1 = draw();
    const FieldFamily v2 = draw();
    const FieldFamily s1 = apply(v1);
    const FieldFamily s2 = apply(v2);
    const double den = x_norm(family_difference(v1, v2));
    const double num = x_norm(family_difference(s1, s2));
    if (den > 0.0) result.theta = std::max(result.theta, num / den);
    result.max_image_norm = std::max({result.max_image_norm, x_norm(s1), x_norm(s2)});
    result.max_input_norm = std::max({result.max_input_norm, x_norm(v1), x_norm(v2)});
  }
  return result;
}

double DuhamelSolver::duhamel_residual(const FieldFamily& v) const {
  return family_sup_norm(family_difference(v, apply(v)));
}

FieldFamily expand_similarity(const CaloricExtension& caloric, const LatticeField& profile_v,
                              const GridSpec& grid, std::span<const double> times) {
  require(grid.dim == caloric.dim(), ErrorCode::InvalidArgument, "grid and data dimensions differ");
  const int L = caloric.ambient_dim();
  const GridSpec& vg = profile_v.grid();
  FieldFamily family;
  family.slices.push_back(homogeneous_extend(caloric.data(), grid));
  for (double t : times) {
    require(t > 0.0, ErrorCode::InvalidArgument, "expansion times must be positive");
    LatticeField slice(grid, L, t);
    const double scale = 1.0 / std::sqrt(t);
    parallel_for(grid.node_count(), [&](std::size_t node) {
      double x[3];
      double y[3];
      double a[16];
      double b[16] = {};
      grid.position(node, x);
      caloric.evaluate(x, t, a);
      bool inside = true;
      for (int k = 0; k < grid.dim; ++k) {
        y[k] = x[k] * scale;
        inside = inside && std::abs(y[k]) <= vg.half_width;
      }
      if (inside) interpolate_into(profile_v, y, b);
      for (int c = 0; c < L; ++c) slice.at(c, node) = a[c] + b[c];
    });
    family.slices.push_back(std::move(slice));
  }
  return family;
}

}  // namespace ssflow
