#include "ssflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "ssflow/errors.hpp"
#include "ssflow/parallel.hpp"
#include "ssflow/quadrature.hpp"

namespace ssflow {

// ---------------------------------------------------------------------------
// Region

Region Region::all() { return Region{}; }

Region Region::ball(std::span<const double> center, double radius) {
  require(radius > 0.0, ErrorCode::InvalidArgument, "ball radius must be positive");
  Region r;
  r.kind = Kind::Ball;
  std::copy(center.begin(), center.end(), r.center.begin());
  r.radius = radius;
  return r;
}

Region Region::box(std::span<const double> center, double half_width) {
  require(half_width > 0.0, ErrorCode::InvalidArgument, "box half width must be positive");
  Region r;
  r.kind = Kind::Box;
  std::copy(center.begin(), center.end(), r.center.begin());
  r.radius = half_width;
  return r;
}

double Region::weight(const GridSpec& grid, const double* x) const {
  switch (kind) {
    case Kind::All:
      return 1.0;
    case Kind::Box: {
      for (int a = 0; a < grid.dim; ++a)
        if (std::abs(x[a] - center[a]) > radius * (1.0 + 1e-12)) return 0.0;
      return 1.0;
    }
    case Kind::Ball: {
      double d = 0.0;
      for (int a = 0; a < grid.dim; ++a) d += (x[a] - center[a]) * (x[a] - center[a]);
      d = std::sqrt(d);
      return std::clamp((radius - d) / grid.spacing() + 0.5, 0.0, 1.0);
    }
  }
  return 0.0;
}

bool Region::inside(const GridSpec& grid) const {
  if (kind == Kind::All) return true;
  for (int a = 0; a < grid.dim; ++a)
    if (std::abs(center[a]) + radius > grid.half_width * (1.0 + 1e-12)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lebesgue and Lorentz norms

double lp_norm(std::span<const double> values, const GridSpec& grid, double p,
               const Region& region) {
  require(values.size() == grid.node_count(), ErrorCode::InvalidArgument,
          "one value per node expected");
  require(p >= 1.0, ErrorCode::InvalidArgument, "lp_norm needs p >= 1");
  const double vol = grid.cell_volume();
  double acc = 0.0;
  double mass = 0.0;
  double x[3];
  const bool all = region.kind == Region::Kind::All;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double w = 1.0;
    if (!all) {
      grid.position(i, x);
      w = region.weight(grid, x);
      if (w == 0.0) continue;
    }
    mass += w;
    const double v = std::abs(values[i]);
    if (std::isinf(p)) {
      if (w >= 0.5) acc = std::max(acc, v);
    } else if (v > 0.0) {
      acc += w * std::pow(v, p);
    }
  }
  require(mass > 0.0, ErrorCode::EmptyRegion, "integration region contains no lattice node");
  if (std::isinf(p)) return acc;
  return std::pow(acc * vol, 1.0 / p);
}

double weak_lp_norm(std::span<const double> values, const GridSpec& grid, double p) {
  require(values.size() == grid.node_count(), ErrorCode::InvalidArgument,
          "one value per node expected");
  require(p >= 1.0, ErrorCode::InvalidArgument, "weak_lp_norm needs p >= 1");
  std::vector<double> sorted(values.size());
  std::transform(values.begin(), values.end(), sorted.begin(), [](double v) { return std::abs(v); });
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (std::isinf(p)) return sorted.empty() ? 0.0 : sorted.front();
  const double vol = grid.cell_volume();
  double best = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] == 0.0) break;
    best = std::max(best, sorted[k] * std::pow((k + 1) * vol, 1.0 / p));
  }
  return best;
}

// ---------------------------------------------------------------------------
// X-norm and BMO

double x_norm(const FieldFamily& v) {
  require(!v.slices.empty() && v.slices.front().time_label() == 0.0 &&
              v.slices.front().sup_norm() == 0.0,
          ErrorCode::MissingInitialSlice, "X-norm needs a vanishing t = 0 slice first");
  double sup = 0.0;
  double grad = 0.0;
  for (const auto& s : v.slices) {
    sup = std::max(sup, s.sup_norm());
    const double t = s.time_label();
    if (t <= 0.0) continue;
    const auto g = gradient(s).magnitude();
    grad = std::max(grad, std::pow(t, 0.25) * lp_norm(g, s.grid(), 2.0 * s.grid().dim));
  }
  return sup + grad;
}

double bmo_seminorm(const LatticeField& field) {
  const GridSpec& grid = field.grid();
  const int m = grid.points_per_axis;
  const int n = grid.dim;
  const int L = field.ambient_dim();
  double best = 0.0;
  for (int level = 0;; ++level) {
    const int parts = 1 << level;
    // Node ranges [lo, hi) per part; a cube of side >= 4h holds >= 5 nodes.
    std::vector<int> cuts(parts + 1);
    for (int k = 0; k <= parts; ++k) cuts[k] = static_cast<int>((static_cast<long>(m) * k) / parts);
    int smallest = m;
    for (int k = 0; k < parts; ++k) smallest = std::min(smallest, cuts[k + 1] - cuts[k]);
    if (smallest < 5) break;
    int cubes = 1;
    for (int a = 0; a < n; ++a) cubes *= parts;
    std::vector<double> osc(cubes, 0.0);
    parallel_for(static_cast<std::size_t>(cubes), [&](std::size_t cube) {
      int part[3] = {0, 0, 0};
      std::size_t rest = cube;
      for (int a = n - 1; a >= 0; --a) {
        part[a] = static_cast<int>(rest % parts);
        rest /= parts;
      }
      int lo[3] = {0, 0, 0};
      int hi[3] = {1, 1, 1};
      for (int a = 0; a < n; ++a) {
        lo[a] = cuts[part[a]];
        hi[a] = cuts[part[a] + 1];
      }
      std::vector<std::size_t> nodes;
      for (int i = lo[0]; i < hi[0]; ++i)
        for (int j = lo[1]; j < hi[1]; ++j)
          for (int k = lo[2]; k < hi[2]; ++k) nodes.push_back(grid.ravel({i, j, k}));
      Vec mean(L, 0.0);
      for (std::size_t node : nodes)
        for (int c = 0; c < L; ++c) mean[c] += field.at(c, node);
      for (double& c : mean) c /= static_cast<double>(nodes.size());
      double acc = 0.0;
      for (std::size_t node : nodes) {
        double d = 0.0;
        for (int c = 0; c < L; ++c) d += (field.at(c, node) - mean[c]) * (field.at(c, node) - mean[c]);
        acc += std::sqrt(d);
      }
      osc[cube] = acc / static_cast<double>(nodes.size());
    });
    for (double o : osc) best = std::max(best, o);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Space-time functionals

GradientSamples gradient_samples(const FieldFamily& u) {
  require(!u.slices.empty(), ErrorCode::InvalidArgument, "empty field family");
  GradientSamples s;
  s.grid = u.grid();
  for (const auto& slice : u.slices) {
    s.times.push_back(slice.time_label());
    s.magnitude.push_back(gradient(slice).magnitude());
  }
  return s;
}

double renormalized_energy(const GradientSamples& samples, std::span<const double> center,
                           double radius, int q) {
  const GridSpec& grid = samples.grid;
  const int n = grid.dim;
  require(q == 2 || q == n, ErrorCode::InvalidArgument, "energy exponent must be 2 or n");
  const Region ball = Region::ball(center.first(n), radius);
  require(ball.inside(grid), ErrorCode::RegionOutsideGrid, "energy ball leaves the lattice box");
  const double t_end = radius * radius;
  require(!samples.times.empty() && samples.times.front() == 0.0 && samples.times.back() >= t_end,
          ErrorCode::RegionOutsideGrid, "slices do not cover [0, R^2]");

  // Nodes carrying weight are the same for every slice.
  std::vector<std::pair<std::size_t, double>> nodes;
  double x[3];
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.position(i, x);
    const double w = ball.weight(grid, x);
    if (w > 0.0) nodes.emplace_back(i, w);
  }
  const double vol = grid.cell_volume();
  auto spatial = [&](std::size_t k) {
    const auto& g = samples.magnitude[k];
    double acc = 0.0;
    for (const auto& [i, w] : nodes) acc += w * (q == 2 ? g[i] * g[i] : std::pow(g[i], q));
    return acc * vol;
  };

  double total = 0.0;
  double prev_t = samples.times[0];
  double prev_e = spatial(0);
  for (std::size_t k = 1; k < samples.times.size() && prev_t < t_end; ++k) {
    const double t = samples.times[k];
    const double e = spatial(k);
    if (t <= t_end) {
      total += 0.5 * (t - prev_t) * (prev_e + e);
    } else {
      const double frac = (t_end - prev_t) / (t - prev_t);
      const double e_end = prev_e + frac * (e - prev_e);
      total += 0.5 * (t_end - prev_t) * (prev_e + e_end);
    }
    prev_t = t;
    prev_e = e;
  }
  const double scale = q == 2 ? std::pow(radius, -n) : std::pow(radius, -2.0);
  return scale * total;
}

double holder_seminorm(const FieldFamily& u, const HolderOptions& options) {
  require(options.gamma > 0.0 && options.gamma <= 1.0, ErrorCode::InvalidArgument,
          "Hölder exponent must lie in (0, 1]");
  require(options.pairs >= 1, ErrorCode::InvalidArgument, "need at least one pair");
  std::vector<const LatticeField*> slices;
  for (const auto& s : u.slices)
    if (s.time_label() <= options.t_max) slices.push_back(&s);
  require(!slices.empty(), ErrorCode::EmptyRegion, "no slice with t <= t_max");
  const GridSpec& grid = u.grid();
  const int n = grid.dim;
  require(options.r_outer <= grid.half_width, ErrorCode::RegionOutsideGrid,
          "Hölder annulus leaves the lattice box");
  const int L = u.slices.front().ambient_dim();
  SeededRng rng(options.seed);

  auto draw_point = [&](double* x) {
    const double r = rng.uniform(options.r_inner, options.r_outer);
    if (n == 2) {
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      x[0] = r * std::cos(th);
      x[1] = r * std::sin(th);
    } else {
      const double z = rng.uniform(-1.0, 1.0);
      const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      x[0] = r * s * std::cos(ph);
      x[1] = r * s * std::sin(ph);
      x[2] = r * z;
    }
  };

  double best = 0.0;
  Vec v1(L);
  Vec v2(L);
  for (int k = 0; k < options.pairs; ++k) {
    const auto i1 = static_cast<std::size_t>(rng.uniform() * slices.size()) % slices.size();
    const auto i2 = static_cast<std::size_t>(rng.uniform() * slices.size()) % slices.size();
    double x1[3];
    double x2[3];
    draw_point(x1);
    draw_point(x2);
    double dx = 0.0;
    for (int a = 0; a < n; ++a) dx += (x1[a] - x2[a]) * (x1[a] - x2[a]);
    dx = std::sqrt(dx);
    const double dt = std::abs(slices[i1]->time_label() - slices[i2]->time_label());
    const double d = std::max(dx, std::sqrt(dt));
    if (d < 1e-12) continue;
    interpolate_into(*slices[i1], x1, v1.data());
    interpolate_into(*slices[i2], x2, v2.data());
    double diff = 0.0;
    for (int c = 0; c < L; ++c) diff += (v1[c] - v2[c]) * (v1[c] - v2[c]);
    best = std::max(best, std::sqrt(diff) / std::pow(d, options.gamma));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Report

NormReport compute_norm_report(const FieldFamily& u, const FieldFamily& v,
                               const NormReportOptions& options) {
  NormReport report;
  const GridSpec& grid = u.grid();
  const int n = grid.dim;
  std::vector<double> exponents = options.exponents;
  if (exponents.empty())
    exponents = {2.0, static_cast<double>(n), 2.0 * n, std::numeric_limits<double>::infinity()};

  std::size_t pick = 0;
  for (std::size_t k = 0; k < u.slices.size(); ++k)
    if (u.slices[k].time_label() <= 1.0) pick = k;
  const auto g = gradient(u.slices[pick]).magnitude();
  for (double p : exponents) {
    report.lp[p] = lp_norm(g, grid, p);
    report.weak_lp[p] = weak_lp_norm(g, grid, p);
  }
  report.x_norm = x_norm(v);
  report.bmo = bmo_seminorm(u.slices[pick]);

  const auto samples = gradient_samples(u);
  for (double cr : options.energy_center_radii) {
    for (double R : options.energy_radii) {
      EnergyEntry e;
      e.center[0] = cr;
      e.radius = R;
      const std::span<const double> c(e.center.data(), n);
      if (!Region::ball(c, R).inside(grid) || samples.times.back() < R * R) continue;
      e.energy_2 = renormalized_energy(samples, c, R, 2);
      e.energy_n = renormalized_energy(samples, c, R, n);
      report.energies.push_back(e);
    }
  }
  report.holder_gamma = options.holder.gamma;
  report.holder = holder_seminorm(u, options.holder);
  return report;
}

}  // namespace ssflow
