#include "ssflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssflow/errors.hpp"
#include "ssflow/parallel.hpp"

namespace ssflow {

namespace {

// Per-node A_hat(u)(grad u, grad u) for one slice.
LatticeField reaction_term(const LatticeField& u, const FieldGradient& g,
                           const ManifoldDescriptor& target) {
  const int L = u.ambient_dim();
  const int n = u.grid().dim;
  LatticeField out(u.grid(), L, u.time_label());
  if (target.kind == ManifoldKind::Euclidean) return out;
  parallel_for(u.node_count(), [&](std::size_t node) {
    double y[16];
    double rows[48];
    double res[16];
    for (int c = 0; c < L; ++c) y[c] = u.at(c, node);
    g.jacobian(node, rows);
    extended_form_trace(target, y, rows, n, res);
    for (int c = 0; c < L; ++c) out.at(c, node) = res[c];
  });
  return out;
}

double time_integral(const std::vector<double>& t, const std::vector<double>& f, double t_end) {
  double total = 0.0;
  for (std::size_t k = 1; k < t.size() && t[k - 1] < t_end; ++k) {
    if (t[k] <= t_end) {
      total += 0.5 * (t[k] - t[k - 1]) * (f[k - 1] + f[k]);
    } else {
      const double frac = (t_end - t[k - 1]) / (t[k] - t[k - 1]);
      const double fe = f[k - 1] + frac * (f[k] - f[k - 1]);
      total += 0.5 * (t_end - t[k - 1]) * (f[k - 1] + fe);
    }
  }
  return total;
}

double ball_integral(const GridSpec& grid, const std::vector<double>& density, const Region& ball) {
  double x[3];
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    grid.position(i, x);
    const double w = ball.weight(grid, x);
    if (w > 0.0) acc += w * density[i];
  }
  return acc * grid.cell_volume();
}

bool times_match(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

}  // namespace

// ---------------------------------------------------------------------------
// PDE residual

ResidualResult pde_residual(const FieldFamily& u, const ManifoldDescriptor& target,
                            const ResidualWindow& window) {
  const GridSpec& grid = u.grid();
  const int n = grid.dim;
  const int L = u.slices.front().ambient_dim();
  const double x_max = window.x_max > 0.0 ? window.x_max : 0.5 * grid.half_width;
  const double y_max = window.y_max > 0.0 ? window.y_max : 0.5 * grid.half_width;
  const double h = grid.spacing();
  ResidualResult result;
  bool any_slice = false;
  for (std::size_t k = 1; k + 1 < u.slices.size(); ++k) {
    const double t0 = u.slices[k - 1].time_label();
    const double t1 = u.slices[k].time_label();
    const double t2 = u.slices[k + 1].time_label();
    if (t0 <= 0.0 || t1 < window.t_min || t1 > window.t_max) continue;
    any_slice = true;
    const double hm = std::log(t1) - std::log(t0);
    const double hp = std::log(t2) - std::log(t1);
    const double cm = -hp / (hm * (hm + hp)) / t1;
    const double c0 = (hp - hm) / (hm * hp) / t1;
    const double cp = hm / (hp * (hm + hp)) / t1;
    const auto& um = u.slices[k - 1];
    const auto& u0 = u.slices[k];
    const auto& up = u.slices[k + 1];
    const FieldGradient g = gradient(u0);
    const LatticeField lap = laplacian(u0);
    const LatticeField react = reaction_term(u0, g, target);
    double x[3];
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      grid.position(node, x);
      double r2 = 0.0;
      double inf = 0.0;
      for (int a = 0; a < n; ++a) {
        r2 += x[a] * x[a];
        inf = std::max(inf, std::abs(x[a]));
      }
      if (inf > x_max || inf > grid.half_width - 2.5 * h || std::sqrt(r2 / t1) > y_max) continue;
      double s = 0.0;
      for (int c = 0; c < L; ++c) {
        const double dt = cm * um.at(c, node) + c0 * u0.at(c, node) + cp * up.at(c, node);
        const double r = dt - lap.at(c, node) - react.at(c, node);
        s += r * r;
      }
      result.sup = std::max(result.sup, std::sqrt(s));
      ++result.samples;
    }
  }
  require(any_slice && result.samples > 0, ErrorCode::ScheduleTooCoarse,
          "no slice with positive-time neighbours inside the residual window");
  return result;
}

// ---------------------------------------------------------------------------
// Self-similarity defect

double similarity_defect(const FieldFamily& u, double lambda, const DefectWindow& window) {
  require(lambda > 1.0, ErrorCode::InvalidArgument, "similarity defect needs lambda > 1");
  const GridSpec& grid = u.grid();
  const int n = grid.dim;
  const int L = u.slices.front().ambient_dim();
  const double h = grid.spacing();
  const double t_min = window.t_min > 0.0 ? window.t_min : 16.0 * h * h;
  const double x_lim = window.x_fraction * grid.half_width;
  const int c = grid.center_index();
  const double rl = std::round(lambda);
  const bool integer = std::abs(lambda - rl) < 1e-12;
  double best = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < u.slices.size(); ++k) {
    const double t = u.slices[k].time_label();
    if (t <= 0.0 || t < t_min) continue;
    int match = -1;
    for (std::size_t j = k + 1; j < u.slices.size(); ++j)
      if (times_match(u.slices[j].time_label(), lambda * lambda * t)) match = static_cast<int>(j);
    if (match < 0) continue;
    if (std::isnan(best)) best = 0.0;
    const auto& a = u.slices[k];
    const auto& b = u.slices[match];
    double x[3];
    double xs[3];
    Vec vb(L);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      grid.position(node, x);
      bool inside = true;
      for (int d = 0; d < n; ++d) {
        xs[d] = lambda * x[d];
        inside = inside && std::abs(xs[d]) <= x_lim * (1.0 + 1e-12);
      }
      if (!inside) continue;
      if (integer) {
        const auto idx = grid.unravel(node);
        std::array<int, 3> j{0, 0, 0};
        for (int d = 0; d < n; ++d) j[d] = c + static_cast<int>(rl) * (idx[d] - c);
        const std::size_t target = grid.ravel(j);
        for (int comp = 0; comp < L; ++comp) vb[comp] = b.at(comp, target);
      } else {
        interpolate_into(b, xs, vb.data());
      }
      double s = 0.0;
      for (int comp = 0; comp < L; ++comp) s += (vb[comp] - a.at(comp, node)) * (vb[comp] - a.at(comp, node));
      best = std::max(best, std::sqrt(s));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Local energy inequality

EnergyDensities energy_densities(const FieldFamily& u, const ManifoldDescriptor& target,
                                 double t_max) {
  EnergyDensities d;
  d.grid = u.grid();
  const int L = u.slices.front().ambient_dim();
  const int n = d.grid.dim;
  const std::size_t N = d.grid.node_count();
  for (std::size_t k = 0; k < u.slices.size(); ++k) {
    const auto& s = u.slices[k];
    const bool last = s.time_label() > t_max;
    const FieldGradient g = gradient(s);
    const LatticeField lap = laplacian(s);
    const LatticeField react = reaction_term(s, g, target);
    std::vector<double> gs(N, 0.0);
    std::vector<double> ts(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      double a = 0.0;
      for (int r = 0; r < n * L; ++r) {
        const double v = g.values[static_cast<std::size_t>(r) * N + i];
        a += v * v;
      }
      gs[i] = a;
      double b = 0.0;
      for (int c = 0; c < L; ++c) {
        const double v = lap.at(c, i) + react.at(c, i);
        b += v * v;
      }
      ts[i] = b;
    }
    d.times.push_back(s.time_label());
    d.grad_sq.push_back(std::move(gs));
    d.tension_sq.push_back(std::move(ts));
    if (last) break;  // keep one slice past t_max for interpolation
  }
  return d;
}

LeiResult local_energy_check(const EnergyDensities& d, std::span<const double> center,
                             double radius) {
  const GridSpec& grid = d.grid;
  const int n = grid.dim;
  const Region outer = Region::ball(center.first(n), radius);
  const Region inner = Region::ball(center.first(n), 0.5 * radius);
  require(outer.inside(grid), ErrorCode::RegionOutsideGrid, "LEI cylinder leaves the lattice box");
  const double t_end = radius * radius;
  require(!d.times.empty() && d.times.front() == 0.0 && d.times.back() >= t_end,
          ErrorCode::RegionOutsideGrid, "slices do not cover [0, R^2]");
  std::vector<double> e_inner, tension_inner, e_outer;
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    e_inner.push_back(ball_integral(grid, d.grad_sq[k], inner));
    tension_inner.push_back(ball_integral(grid, d.tension_sq[k], inner));
    e_outer.push_back(ball_integral(grid, d.grad_sq[k], outer));
  }
  double sup = 0.0;
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    if (d.times[k] <= t_end) {
      sup = std::max(sup, e_inner[k]);
    } else {
      const double frac = (t_end - d.times[k - 1]) / (d.times[k] - d.times[k - 1]);
      sup = std::max(sup, e_inner[k - 1] + frac * (e_inner[k] - e_inner[k - 1]));
      break;
    }
  }
  LeiResult r;
  std::copy(center.begin(), center.begin() + n, r.center.begin());
  r.radius = radius;
  r.lhs = sup + time_integral(d.times, tension_inner, t_end);
  r.rhs = e_outer.front() + 64.0 / t_end * time_integral(d.times, e_outer, t_end);
  r.slack = r.rhs - r.lhs;
  return r;
}

// ---------------------------------------------------------------------------
// Energy decay

std::vector<double> geometric_radii(double r0, double factor, int count) {
  require(r0 > 0.0 && factor > 0.0 && factor < 1.0 && count >= 1, ErrorCode::InvalidArgument,
          "invalid radius progression");
  std::vector<double> r;
  double v = r0;
  for (int k = 0; k < count; ++k, v *= factor) r.push_back(v);
  return r;
}

DecayFit decay_exponent_fit(const GradientSamples& samples, std::span<const double> center,
                            std::span<const double> radii) {
  require(radii.size() >= 4, ErrorCode::InvalidArgument, "decay fit needs at least 4 radii");
  const int n = samples.grid.dim;
  DecayFit fit;
  std::copy(center.begin(), center.begin() + n, fit.center.begin());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  bool any = false;
  for (double r : radii) {
    const double e = renormalized_energy(samples, center, r, 2);
    fit.radii.push_back(r);
    fit.energies.push_back(e);
    any = any || e >= 1e-14;
  }
  require(any, ErrorCode::DegenerateFit, "all renormalized energies vanish; decay is vacuous");
  int count = 0;
  for (std::size_t k = 0; k < fit.radii.size(); ++k) {
    if (fit.energies[k] <= 0.0) continue;
    const double x = std::log(fit.radii[k]);
    const double y = std::log(fit.energies[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  require(count >= 2, ErrorCode::DegenerateFit, "fewer than two positive energies");
  fit.exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return fit;
}

// ---------------------------------------------------------------------------
// Smoothness probe

std::vector<SmoothnessEntry> smoothness_probe(const LatticeField& profile,
                                              std::span<const double> radii,
                                              std::span<const int> orders) {
  const std::vector<double> default_radii{1.0, 2.0, 4.0};
  const std::vector<int> default_orders{1, 2};
  if (radii.empty()) radii = default_radii;
  if (orders.empty()) orders = default_orders;
  const GridSpec& grid = profile.grid();
  const int n = grid.dim;
  const int L = profile.ambient_dim();
  const std::size_t N = grid.node_count();

  const FieldGradient g1 = gradient(profile);
  std::vector<double> mag1 = g1.magnitude();
  // Second derivatives: gradient of each first-derivative component.
  std::vector<double> mag2(N, 0.0);
  for (int a = 0; a < n; ++a) {
    LatticeField da(grid, L);
    for (int c = 0; c < L; ++c)
      for (std::size_t i = 0; i < N; ++i) da.at(c, i) = g1.at(a, c, i);
    const FieldGradient g2 = gradient(da);
    for (std::size_t r = 0; r < static_cast<std::size_t>(n) * L; ++r)
      for (std::size_t i = 0; i < N; ++i) mag2[i] += g2.values[r * N + i] * g2.values[r * N + i];
  }
  for (double& v : mag2) v = std::sqrt(v);

  std::vector<SmoothnessEntry> out;
  double x[3];
  for (int k : orders) {
    require(k == 1 || k == 2, ErrorCode::InvalidArgument, "smoothness orders are 1 and 2");
    const auto& mag = k == 1 ? mag1 : mag2;
    for (double R : radii) {
      double best = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        grid.position(i, x);
        double r2 = 0.0;
        double inf = 0.0;
        for (int a = 0; a < n; ++a) {
          r2 += x[a] * x[a];
          inf = std::max(inf, std::abs(x[a]));
        }
        if (r2 > R * R || inf > grid.half_width - 4.5 * grid.spacing()) continue;
        best = std::max(best, mag[i]);
      }
      out.push_back({k, R, best});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report

bool VerificationReport::all_pass() const {
  return std::all_of(pass_flags.begin(), pass_flags.end(), [](const auto& kv) { return kv.second; });
}

VerificationReport run_verification(const FieldFamily& u, const SphericalData& data,
                                    const LatticeField* profile, const VerifyOptions& options) {
  const auto& target = data.target();
  const GridSpec& grid = u.grid();
  const int n = grid.dim;
  const auto& th = options.thresholds;
  VerificationReport report;

  report.pde_residual = pde_residual(u, target, options.residual_window).sup;
  report.pass_flags["pde_residual"] = report.pde_residual <= th.pde_residual;

  for (const auto& [lambda, tol] : th.defect) {
    const double d = similarity_defect(u, lambda, options.defect_window);
    report.similarity_defect[lambda] = d;
    report.pass_flags["similarity_defect_" + std::to_string(static_cast<int>(lambda))] =
        std::isfinite(d) && d <= tol;
  }

  double lei_t = 0.0;
  for (double R : options.lei_radii) lei_t = std::max(lei_t, R * R);
  const EnergyDensities dens = energy_densities(u, target, lei_t);
  bool lei_ok = true;
  for (const auto& c : options.lei_centers) {
    for (double R : options.lei_radii) {
      const LeiResult r = local_energy_check(dens, std::span<const double>(c.data(), n), R);
      lei_ok = lei_ok && r.lhs <= (1.0 + th.lei_relative_slack) * r.rhs;
      report.lei.push_back(r);
    }
  }
  report.pass_flags["local_energy_inequality"] = lei_ok;

  const GradientSamples samples = gradient_samples(u);
  const auto radii = geometric_radii(options.decay_r0, options.decay_factor, options.decay_count);
  bool decay_ok = true;
  for (const auto& c : options.decay_centers) {
    DecayFit fit;
    try {
      fit = decay_exponent_fit(samples, std::span<const double>(c.data(), n), radii);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFit) throw;
      std::copy(c.begin(), c.begin() + n, fit.center.begin());
      fit.radii = radii;
      fit.exponent = std::numeric_limits<double>::infinity();
    }
    decay_ok = decay_ok && fit.exponent >= 2.0 / n - th.decay_margin;
    report.decay_fits.push_back(fit);
  }
  report.pass_flags["decay_exponent"] = decay_ok;

  HolderOptions holder = options.holder;
  if (holder.gamma <= 0.0) holder.gamma = 1.0 / n;
  report.holder_gamma = holder.gamma;
  report.holder = holder_seminorm(u, holder);
  report.pass_flags["holder_finite"] = std::isfinite(report.holder);

  if (options.semigroup) {
    report.semigroup = semigroup_estimate_report(data, grid, options.semigroup_times, 4.0 * n);
    const auto& sg = *report.semigroup;
    report.pass_flags["semigroup_weak"] = sg.max_weak_ratio() <= th.semigroup_weak_ratio;
    report.pass_flags["semigroup_constants"] =
        sg.l2n_spread() <= th.semigroup_spread && sg.lp_spread() <= th.semigroup_spread;
  }

  if (profile != nullptr) report.smoothness = smoothness_probe(*profile);
  return report;
}

}  // namespace ssflow
