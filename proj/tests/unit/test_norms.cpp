#include <gtest/gtest.h>

#include <cmath>
#include <source_location>
#include <limits>
#include <numbers>

#include "ssflow/errors.hpp"
#include "ssflow/norms.hpp"
#include "ssflow/quadrature.hpp"

using namespace ssflow;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
LatticeField sample(const GridSpec& g, int L, double t, F f) {
  LatticeField out(g, L, t);
  double x[3] = {0, 0, 0};
  std::vector<double> v(L);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.position(i, x);
    f(x, v.data());
    for (int c = 0; c < L; ++c) out.at(c, i) = v[c];
  }
  return out;
}

// Family of u(x, t) = slope * x_0 (time independent), slices at `times`.
FieldFamily linear_family(const GridSpec& g, double slope, std::vector<double> times) {
  FieldFamily f;
  for (double t : times) f.slices.push_back(sample(g, 1, t, [&](const double* x, double* v) { v[0] = slope * x[0]; }));
  return f;
}

void expect_code(ErrorCode code, auto&& fn, std::source_location where = std::source_location::current()) {
  try {
    fn();
    ADD_FAILURE() << "no exception thrown (line " << where.line() << ")";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Region, WeightsAndContainment) {
  const GridSpec g{2, 2.0, 17};
  const double c[2] = {0.5, 0.0};
  const auto ball = Region::ball(c, 1.0);
  double x[3] = {0.5, 0.0, 0.0};
  EXPECT_EQ(ball.weight(g, x), 1.0);
  x[0] = 3.0;
  EXPECT_EQ(ball.weight(g, x), 0.0);
  x[0] = 1.5;  // exactly on the sphere: half a node
  EXPECT_NEAR(ball.weight(g, x), 0.5, 1e-12);
  EXPECT_TRUE(ball.inside(g));
  EXPECT_FALSE(Region::ball(c, 1.6).inside(g));
  EXPECT_TRUE(Region::all().inside(g));
  EXPECT_THROW(Region::ball(c, 0.0), Error);
  EXPECT_THROW(Region::box(c, -1.0), Error);
}

TEST(LpNorm, ConstantsAndInfinity) {
  const GridSpec g{2, 1.0, 9};
  const std::vector<double> ones(g.node_count(), 1.0);
  const double mass = g.node_count() * g.cell_volume();
  for (double p : {1.0, 2.0, 3.5}) EXPECT_NEAR(lp_norm(ones, g, p), std::pow(mass, 1.0 / p), 1e-13);
  std::vector<double> v(g.node_count(), 0.25);
  v[7] = -3.0;
  EXPECT_EQ(lp_norm(v, g, kInf), 3.0);
  EXPECT_EQ(weak_lp_norm(v, g, kInf), 3.0);
}

TEST(LpNorm, BallVolumeConvergesUnderRefinement) {
  double prev = 1.0;
  for (int m : {33, 65, 129}) {
    const GridSpec g{2, 2.0, m};
    const std::vector<double> ones(g.node_count(), 1.0);
    const double c[2] = {0.1, -0.2};
    const double err = std::abs(lp_norm(ones, g, 1.0, Region::ball(c, 1.0)) - std::numbers::pi);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(LpNorm, ErrorPaths) {
  const GridSpec g{2, 1.0, 9};
  const std::vector<double> ones(g.node_count(), 1.0);
  const double far[2] = {50.0, 50.0};
  expect_code(ErrorCode::EmptyRegion, [&] { lp_norm(ones, g, 2.0, Region::ball(far, 0.5)); });
  expect_code(ErrorCode::InvalidArgument, [&] { lp_norm(ones, g, 0.5); });
  expect_code(ErrorCode::InvalidArgument, [&] { lp_norm(std::vector<double>(3, 1.0), g, 2.0); });
  expect_code(ErrorCode::InvalidArgument, [&] { weak_lp_norm(ones, g, 0.9); });
}

TEST(LpNorm, Homogeneity) {
  const GridSpec g{3, 1.0, 9};
  SeededRng rng(4);
  std::vector<double> v(g.node_count());
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  std::vector<double> w = v;
  for (double& x : w) x *= -2.5;
  for (double p : {1.0, 3.0, kInf}) EXPECT_NEAR(lp_norm(w, g, p), 2.5 * lp_norm(v, g, p), 1e-12);
  EXPECT_NEAR(weak_lp_norm(w, g, 3.0), 2.5 * weak_lp_norm(v, g, 3.0), 1e-12);
  // The weak norm never exceeds the strong one.
  EXPECT_LE(weak_lp_norm(v, g, 3.0), lp_norm(v, g, 3.0) * (1 + 1e-12));
}

TEST(WeakLpNorm, InverseRadiusInTwoDimensions) {
  // With the core |x| < 1/2 removed, |{f > s}| = pi / s^2 - pi / 4 for s < 2,
  // so s |{f > s}|^{1/2} approaches sqrt(pi) as s decreases.
  const GridSpec g{2, 8.0, 513};
  std::vector<double> v(g.node_count(), 0.0);
  double x[3];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.position(i, x);
    const double r = std::hypot(x[0], x[1]);
    if (r >= 0.5) v[i] = 1.0 / r;
  }
  EXPECT_NEAR(weak_lp_norm(v, g, 2.0), std::sqrt(std::numbers::pi), 0.05);
}

TEST(XNorm, LinearFieldClosedForm) {
  const GridSpec g{2, 2.0, 17};
  auto v = linear_family(g, 0.3, {1.0, 4.0});
  v.slices.insert(v.slices.begin(), LatticeField(g, 1, 0.0));
  const double mass = g.node_count() * g.cell_volume();
  const double expected = 0.3 * 2.0 + std::pow(4.0, 0.25) * 0.3 * std::pow(mass, 0.25);
  EXPECT_NEAR(x_norm(v), expected, 1e-12);
}

TEST(XNorm, NeedsVanishingInitialSlice) {
  const GridSpec g{2, 2.0, 17};
  expect_code(ErrorCode::MissingInitialSlice, [&] { x_norm(linear_family(g, 1.0, {0.5, 1.0})); });
  expect_code(ErrorCode::MissingInitialSlice, [&] { x_norm(linear_family(g, 1.0, {0.0, 1.0})); });
  expect_code(ErrorCode::MissingInitialSlice, [&] { x_norm(FieldFamily{}); });
}

TEST(Bmo, ConstantsStepAndInvariances) {
  const GridSpec g{2, 1.0, 33};
  EXPECT_EQ(bmo_seminorm(sample(g, 2, 0.0, [](const double*, double* v) { v[0] = 3.0; v[1] = -1.0; })), 0.0);
  const auto step = sample(g, 1, 0.0, [](const double* x, double* v) { v[0] = x[0] >= 0.0 ? 1.0 : -1.0; });
  const double b = bmo_seminorm(step);
  EXPECT_GT(b, 0.9);
  EXPECT_LE(b, 1.0 + 1e-12);
  SeededRng rng(8);
  const auto f = sample(g, 1, 0.0, [&](const double*, double* v) { v[0] = rng.uniform(); });
  const auto shifted = sample(g, 1, 0.0, [](const double*, double* v) { v[0] = 5.0; }) + f;
  EXPECT_NEAR(bmo_seminorm(shifted), bmo_seminorm(f), 1e-12);
  EXPECT_NEAR(bmo_seminorm(-3.0 * f), 3.0 * bmo_seminorm(f), 1e-12);
}

TEST(RenormalizedEnergy, ConstantGradientClosedForms) {
  const double c = 0.7;
  {
    const GridSpec g{2, 2.0, 129};
    const auto s = gradient_samples(linear_family(g, c, {0.0, 0.5, 1.0, 2.0}));
    const double x0[2] = {0.0, 0.0};
    EXPECT_NEAR(renormalized_energy(s, x0, 1.0, 2), c * c * std::numbers::pi, 2e-3);
  }
  {
    const GridSpec g{3, 2.0, 65};
    const auto s = gradient_samples(linear_family(g, c, {0.0, 0.25, 1.0}));
    const double x0[3] = {0.2, 0.0, 0.0};
    const double vol = 4.0 / 3.0 * std::numbers::pi;
    EXPECT_NEAR(renormalized_energy(s, x0, 1.0, 2), c * c * vol, 1e-2);
    EXPECT_NEAR(renormalized_energy(s, x0, 1.0, 3), c * c * c * vol, 1e-2);
  }
}

TEST(RenormalizedEnergy, InterpolatesAtTheEndTime) {
  // Energy density growing linearly in t: |grad u|^2 = t, so int_0^{R^2} t dt = R^4 / 2.
  const GridSpec g{2, 2.0, 65};
  FieldFamily f;
  for (double t : {0.0, 1.0}) {
    f.slices.push_back(sample(g, 1, t, [&](const double* x, double* v) { v[0] = std::sqrt(t) * x[1]; }));
  }
  const auto s = gradient_samples(f);
  const double x0[2] = {0.0, 0.0};
  const double R = 0.5;
  const double ball = lp_norm(std::vector<double>(g.node_count(), 1.0), g, 1.0, Region::ball(x0, R));
  EXPECT_NEAR(renormalized_energy(s, x0, R, 2), std::pow(R, -2) * ball * std::pow(R, 4) / 2, 1e-12);
}

TEST(RenormalizedEnergy, ErrorPaths) {
  const GridSpec g{2, 2.0, 33};
  const auto s = gradient_samples(linear_family(g, 1.0, {0.0, 0.5}));
  const double x0[2] = {1.5, 0.0};
  expect_code(ErrorCode::RegionOutsideGrid, [&] { renormalized_energy(s, x0, 1.0, 2); });
  const double o[2] = {0.0, 0.0};
  expect_code(ErrorCode::RegionOutsideGrid, [&] { renormalized_energy(s, o, 1.0, 2); });
  expect_code(ErrorCode::InvalidArgument, [&] { renormalized_energy(s, o, 0.5, 3); });
  expect_code(ErrorCode::InvalidArgument, [&] { gradient_samples(FieldFamily{}); });
}

TEST(Holder, LinearFunctionHasUnitLipschitzConstant) {
  const GridSpec g{2, 3.0, 65};
  const auto u = linear_family(g, 1.0, {0.0, 0.01, 0.02});
  HolderOptions opt;
  opt.gamma = 1.0;
  opt.pairs = 4000;
  const double h = holder_seminorm(u, opt);
  EXPECT_LE(h, 1.0 + 1e-9);
  EXPECT_GT(h, 0.9);
}

TEST(Holder, SeedDeterminism) {
  const GridSpec g{2, 3.0, 33};
  FieldFamily u;
  for (double t : {0.0, 0.02, 0.04}) {
    u.slices.push_back(sample(g, 1, t, [&](const double* x, double* v) { v[0] = std::sin(3 * x[0]) * std::cos(x[1]) + t; }));
  }
  HolderOptions a;
  a.seed = 17;
  a.pairs = 300;
  HolderOptions b = a;
  b.seed = 18;
  EXPECT_EQ(holder_seminorm(u, a), holder_seminorm(u, a));
  EXPECT_NE(holder_seminorm(u, a), holder_seminorm(u, b));
  // Smaller exponents see the same differences over distances below one.
  HolderOptions lower = a;
  lower.gamma = 0.25;
  EXPECT_LE(holder_seminorm(u, lower), holder_seminorm(u, a) * 8.0);
}

TEST(Holder, ErrorPaths) {
  const GridSpec g{2, 1.0, 17};
  const auto u = linear_family(g, 1.0, {0.0, 0.01});
  HolderOptions opt;
  opt.gamma = 0.0;
  expect_code(ErrorCode::InvalidArgument, [&] { holder_seminorm(u, opt); });
  opt.gamma = 0.5;
  expect_code(ErrorCode::RegionOutsideGrid, [&] { holder_seminorm(u, opt); });
  opt.r_outer = 0.9;
  opt.t_max = -1.0;
  expect_code(ErrorCode::EmptyRegion, [&] { holder_seminorm(u, opt); });
  opt.t_max = 1.0;
  opt.pairs = 0;
  expect_code(ErrorCode::InvalidArgument, [&] { holder_seminorm(u, opt); });
}

TEST(NormReport, CollectsEveryEntry) {
  const GridSpec g{2, 4.0, 65};
  const auto u = linear_family(g, 0.5, {0.0, 0.5, 1.0, 2.0, 4.0});
  FieldFamily v;
  for (double t : {0.0, 1.0}) v.slices.emplace_back(g, 1, t);
  NormReportOptions opt;
  opt.holder.pairs = 50;
  const auto r = compute_norm_report(u, v, opt);
  EXPECT_EQ(r.lp.size(), 3u);  // {2, n, 2n, inf} with n = 2
  EXPECT_EQ(r.x_norm, 0.0);
  EXPECT_EQ(r.energies.size(), 9u);
  EXPECT_EQ(r.lp.at(kInf), 0.5);
  for (const auto& e : r.energies) EXPECT_NEAR(e.energy_2, 0.25 * std::numbers::pi * e.radius * e.radius, 0.02);
  EXPECT_GT(r.holder, 0.0);
}
