#include "ssflow/equivariant_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "ssflow/errors.hpp"

namespace ssflow {

namespace {

using State = std::array<double, 2>;

struct ProfileRhs {
  double nm1;
  void operator()(const State& x, State& dxdt, double rho) const {
    dxdt[0] = x[1];
    dxdt[1] = -(nm1 / rho + 0.5 * rho) * x[1] + nm1 * std::sin(2.0 * x[0]) / (2.0 * rho * rho);
  }
};

}  // namespace

ProfileSamples integrate_profile(int n, double a, const ProfileOptions& options) {
  namespace odeint = boost::numeric::odeint;
  require(n >= 2, ErrorCode::InvalidArgument, "profile ODE needs n >= 2");
  require(options.rho0 > 0.0 && options.rho_max > options.rho0 && options.output_step > 0.0,
          ErrorCode::InvalidArgument, "invalid profile integration range");
  const double nm1 = n - 1.0;
  const double c = -(0.5 * a + (2.0 / 3.0) * nm1 * a * a * a) / (2.0 * (n + 2.0));
  const double r0 = options.rho0;
  State x{a * r0 + c * r0 * r0 * r0, a + 3.0 * c * r0 * r0};

  ProfileSamples out;
  out.rho.push_back(0.0);
  out.psi.push_back(0.0);
  out.dpsi.push_back(a);
  if (a == 0.0) {
    for (double r = options.output_step; r <= options.rho_max * (1.0 + 1e-12); r += options.output_step) {
      out.rho.push_back(r);
      out.psi.push_back(0.0);
      out.dpsi.push_back(0.0);
    }
    return out;
  }

  std::vector<double> times{r0};
  const auto steps = static_cast<long>(std::floor(options.rho_max / options.output_step + 1e-9));
  for (long k = 1; k <= steps; ++k) times.push_back(k * options.output_step);
  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol,
                                           odeint::runge_kutta_dopri5<State>());
  auto observer = [&](const State& s, double rho) {
    require(std::abs(s[0]) <= std::numbers::pi && std::isfinite(s[1]), ErrorCode::BlowUp,
            "profile left [-pi, pi]; the slope is too large");
    if (rho == r0) return;
    out.rho.push_back(rho);
    out.psi.push_back(s[0]);
    out.dpsi.push_back(s[1]);
  };
  odeint::integrate_times(stepper, ProfileRhs{nm1}, x, times.begin(), times.end(), 1e-3, observer);
  return out;
}

TailCoefficients tail_coefficients(int n, double psi_inf) {
  const double nm1 = n - 1.0;
  TailCoefficients t;
  t.c2 = -0.5 * nm1 * std::sin(2.0 * psi_inf);
  t.c4 = 0.5 * t.c2 * (6.0 - 2.0 * nm1 - nm1 * std::cos(2.0 * psi_inf));
  return t;
}

double extrapolate_limit(int n, double rho, double psi) {
  double limit = psi;
  const double r2 = 1.0 / (rho * rho);
  for (int k = 0; k < 50; ++k) {
    const auto tc = tail_coefficients(n, limit);
    const double next = psi - tc.c2 * r2 - tc.c4 * r2 * r2;
    if (std::abs(next - limit) < 1e-17) {
      limit = next;
      break;
    }
    limit = next;
  }
  return limit;
}

double fit_tail_exponent(const ProfileSamples& samples, double psi_inf, double rho_lo) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < samples.rho.size(); ++k) {
    if (samples.rho[k] < rho_lo) continue;
    const double d = std::abs(samples.psi[k] - psi_inf);
    if (d <= 0.0) continue;
    const double x = std::log(samples.rho[k]);
    const double y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  require(count >= 2, ErrorCode::DegenerateFit, "not enough tail samples for a fit");
  const double den = count * sxx - sx * sx;
  require(den > 0.0, ErrorCode::DegenerateFit, "degenerate tail fit");
  return (count * sxy - sx * sy) / den;
}

double ProfileSolution::psi(double rho) const {
  const auto& r = samples.rho;
  require(!r.empty(), ErrorCode::InvalidArgument, "empty profile");
  rho = std::abs(rho);
  if (rho >= r.back()) {
    if (rho == r.back()) return samples.psi.back();
    const auto tc = tail_coefficients(dim, psi_inf);
    const double i2 = 1.0 / (rho * rho);
    return psi_inf + tc.c2 * i2 + tc.c4 * i2 * i2;
  }
  const auto it = std::upper_bound(r.begin(), r.end(), rho);
  const std::size_t k = static_cast<std::size_t>(it - r.begin()) - 1;
  const double h = r[k + 1] - r[k];
  const double s = (rho - r[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * samples.psi[k] + h10 * h * samples.dpsi[k] + h01 * samples.psi[k + 1] +
         h11 * h * samples.dpsi[k + 1];
}

namespace {

// psi_inf(a), with +/-inf standing for a blow-up (|psi| > pi) in the direction of a.
double limit_for_slope(int n, double a, const ProfileOptions& options, ProfileSamples* keep) {
  try {
    ProfileSamples s = integrate_profile(n, a, options);
    const double limit = extrapolate_limit(n, s.rho.back(), s.psi.back());
    if (keep) *keep = std::move(s);
    return limit;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BlowUp) throw;
    return a > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

ProfileSolution shoot(int n, double alpha, const ShootOptions& options) {
  require(options.tol_shoot > 0.0 && options.tol_shoot <= 1e-8, ErrorCode::InvalidArgument,
          "tol_shoot must lie in (0, 1e-8]");
  ProfileSolution sol;
  sol.dim = n;
  sol.alpha = alpha;
  const double target = std::abs(alpha);
  const double sign = alpha < 0.0 ? -1.0 : 1.0;

  if (target == 0.0) {
    sol.samples = integrate_profile(n, 0.0, options.profile);
    sol.converged = true;
    return sol;
  }

  double lo = 0.0;
  double hi = std::min(target, options.max_slope);
  double f_hi = limit_for_slope(n, hi, options.profile, nullptr);
  while (f_hi < target) {
    lo = hi;
    if (hi >= options.max_slope) fail(ErrorCode::NoBracket, "no slope bracket within max_slope");
    hi = std::min(2.0 * hi, options.max_slope);
    f_hi = limit_for_slope(n, hi, options.profile, nullptr);
  }

  ProfileSamples best;
  double a = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    a = 0.5 * (lo + hi);
    ProfileSamples samples;
    const double f = limit_for_slope(n, a, options.profile, &samples);
    ++sol.iterations;
    if (std::isfinite(f) && std::abs(f - target) <= options.tol_shoot) {
      best = std::move(samples);
      sol.psi_inf = f;
      sol.converged = true;
      break;
    }
    if (f < target)
      lo = a;
    else
      hi = a;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      if (std::isfinite(f)) {
        best = std::move(samples);
        sol.psi_inf = f;
      }
      break;
    }
  }
  require(!best.rho.empty(), ErrorCode::NoBracket, "bisection did not produce a profile");

  sol.slope = sign * a;
  sol.psi_inf *= sign;
  if (sign < 0.0) {
    for (double& v : best.psi) v = -v;
    for (double& v : best.dpsi) v = -v;
  }
  sol.samples = std::move(best);
  try {
    sol.tail_fit = fit_tail_exponent(sol.samples, sol.psi_inf, 10.0);
  } catch (const Error&) {
    sol.tail_fit = 0.0;
  }
  return sol;
}

LatticeField lift_profile(const ProfileSolution& profile, const GridSpec& grid) {
  grid.validate();
  require(grid.dim == profile.dim, ErrorCode::InvalidArgument, "grid and profile dimensions differ");
  const int n = grid.dim;
  LatticeField field(grid, n + 1, 1.0, true);
  double x[3];
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    grid.position(node, x);
    double r = 0.0;
    for (int a = 0; a < n; ++a) r += x[a] * x[a];
    r = std::sqrt(r);
    if (r == 0.0) {
      field.at(n, node) = 1.0;
      continue;
    }
    const double p = profile.psi(r);
    const double s = std::sin(p);
    for (int a = 0; a < n; ++a) field.at(a, node) = s * x[a] / r;
    field.at(n, node) = std::cos(p);
  }
  return field;
}

}  // namespace ssflow
