#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ssflow/errors.hpp"
#include "ssflow/fields.hpp"
#include "ssflow/quadrature.hpp"

using namespace ssflow;

namespace {

LatticeField sample(const GridSpec& g, auto f) {
  LatticeField out(g, 1);
  double x[3] = {0, 0, 0};
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.position(i, x);
    out.at(0, i) = f(x);
  }
  return out;
}

bool interior(const GridSpec& g, std::size_t node, int layer) {
  const auto idx = g.unravel(node);
  for (int a = 0; a < g.dim; ++a)
    if (idx[a] < layer || idx[a] > g.points_per_axis - 1 - layer) return false;
  return true;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ssflow_test_" + name)).string();
}

}  // namespace

TEST(GridSpec, GeometryAndIndexing) {
  const GridSpec g{2, 4.0, 9};
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0);
  EXPECT_EQ(g.node_count(), 81u);
  EXPECT_EQ(g.center_index(), 4);
  EXPECT_DOUBLE_EQ(g.coord(0), -4.0);
  EXPECT_DOUBLE_EQ(g.coord(8), 4.0);
  EXPECT_EQ(g.stride(0), 9u);
  EXPECT_EQ(g.stride(1), 1u);
  EXPECT_DOUBLE_EQ(g.cell_volume(), 1.0);
  for (std::size_t i = 0; i < g.node_count(); ++i) EXPECT_EQ(g.ravel(g.unravel(i)), i);
  double x[3];
  g.position(g.ravel({4, 4, 0}), x);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_EQ(x[1], 0.0);
  g.position(g.ravel({1, 7, 0}), x);
  EXPECT_DOUBLE_EQ(x[0], -3.0);
  EXPECT_DOUBLE_EQ(x[1], 3.0);
  const GridSpec g3{3, 1.0, 5};
  for (std::size_t i = 0; i < g3.node_count(); ++i) EXPECT_EQ(g3.ravel(g3.unravel(i)), i);
  EXPECT_EQ(g3.node_count(), 125u);
}

TEST(GridSpec, RefinedKeepsCoarseNodes) {
  const GridSpec g{2, 3.0, 7};
  const GridSpec f = g.refined();
  EXPECT_EQ(f.points_per_axis, 13);
  for (int i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(g.coord(i), f.coord(2 * i));
}

TEST(GridSpec, ValidateRejectsBadGrids) {
  for (const GridSpec& bad : {GridSpec{2, 8.0, 256}, GridSpec{4, 8.0, 9}, GridSpec{2, -1.0, 9}, GridSpec{2, 1.0, 1}}) {
    try {
      bad.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigError);
    }
  }
}

TEST(LatticeField, ArithmeticAndNorms) {
  const GridSpec g{2, 1.0, 5};
  LatticeField a(g, 3, 0.5), b(g, 3, 0.5);
  a.at(2, 7) = 3.0;
  a.at(0, 7) = 4.0;
  b.at(1, 3) = -2.0;
  EXPECT_DOUBLE_EQ(a.sup_norm(), 5.0);
  const LatticeField c = a + b;
  EXPECT_DOUBLE_EQ(c.at(1, 3), -2.0);
  EXPECT_DOUBLE_EQ((c - b).at(2, 7), 3.0);
  EXPECT_DOUBLE_EQ((2.0 * a).sup_norm(), 10.0);
  EXPECT_TRUE(a.is_finite());
  a.at(1, 1) = std::nan("");
  EXPECT_FALSE(a.is_finite());
  const LatticeField other(GridSpec{2, 1.0, 7}, 3);
  EXPECT_THROW(b += other, Error);
  const Vec v = c.value(7);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[0], 4.0);
}

TEST(LatticeField, DistanceToSphere) {
  const GridSpec g{2, 1.0, 5};
  LatticeField a(g, 3);
  for (std::size_t i = 0; i < a.node_count(); ++i) a.at(2, i) = 1.0;
  a.at(2, 4) = 1.2;
  EXPECT_NEAR(a.max_distance(ManifoldDescriptor::unit_sphere(3)), 0.2, 1e-15);
}

TEST(FieldFamily, FindUsesRelativeTolerance) {
  const GridSpec g{2, 1.0, 5};
  FieldFamily f;
  for (double t : {0.0, 0.5, 1.0, 1000.0}) f.slices.emplace_back(g, 1, t);
  EXPECT_EQ(f.find(0.0), 0);
  EXPECT_EQ(f.find(1.0 + 1e-14), 2);
  EXPECT_EQ(f.find(1000.0 * (1 + 1e-13)), 3);
  EXPECT_EQ(f.find(0.75), -1);
  EXPECT_EQ(f.times().size(), 4u);
}

TEST(SphericalData, CorotationalValues) {
  const auto d = SphericalData::corotational(2, 0.3);
  const double w[2] = {0.6, 0.8};
  double out[3];
  d.evaluate(w, out);
  EXPECT_DOUBLE_EQ(out[0], std::sin(0.3) * 0.6);
  EXPECT_DOUBLE_EQ(out[1], std::sin(0.3) * 0.8);
  EXPECT_DOUBLE_EQ(out[2], std::cos(0.3));
  const double x[2] = {3.0, 4.0};
  d.evaluate_homogeneous(x, out);
  EXPECT_DOUBLE_EQ(out[0], std::sin(0.3) * 0.6);
  EXPECT_THROW(SphericalData::corotational(4, 0.1), Error);
  EXPECT_THROW(SphericalData::corotational(2, 0.1, ManifoldDescriptor::unit_sphere(4)), Error);
}

TEST(SphericalData, TabulatedInterpolatesSmoothData) {
  const int nt = 64;
  SphericalData::Table table;
  table.n_theta = nt;
  for (int k = 0; k < nt; ++k) {
    const double th = 2.0 * std::numbers::pi * k / nt;
    const double a = 0.2 + 0.1 * std::cos(th);
    table.values.insert(table.values.end(), {std::sin(a) * std::cos(th), std::sin(a) * std::sin(th), std::cos(a)});
  }
  const auto d = SphericalData::tabulated(2, ManifoldDescriptor::unit_sphere(3), table);
  for (double th : {0.0, 0.37, 1.9, 4.4, 6.2}) {
    const double a = 0.2 + 0.1 * std::cos(th);
    const double w[2] = {std::cos(th), std::sin(th)};
    double out[3];
    d.evaluate(w, out);
    EXPECT_NEAR(out[0], std::sin(a) * std::cos(th), 1e-5);
    EXPECT_NEAR(out[2], std::cos(a), 1e-5);
    EXPECT_NEAR(out[0] * out[0] + out[1] * out[1] + out[2] * out[2], 1.0, 1e-14);
  }
}

TEST(SphericalData, TabulatedRejectsBadTables) {
  SphericalData::Table t;
  t.n_theta = 8;
  t.values.assign(8 * 3, 0.0);
  for (int k = 0; k < 8; ++k) t.values[3 * k + 2] = 1.0;
  EXPECT_NO_THROW(SphericalData::tabulated(2, ManifoldDescriptor::unit_sphere(3), t));
  auto off = t;
  off.values[2] = 1.5;
  try {
    SphericalData::tabulated(2, ManifoldDescriptor::unit_sphere(3), off);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOnManifold);
  }
  auto short_table = t;
  short_table.values.pop_back();
  EXPECT_THROW(SphericalData::tabulated(2, ManifoldDescriptor::unit_sphere(3), short_table), Error);
  auto tiny = t;
  tiny.n_theta = 2;
  EXPECT_THROW(SphericalData::tabulated(2, ManifoldDescriptor::unit_sphere(3), tiny), Error);
}

TEST(HomogeneousExtend, DegreeZeroAndOriginOnSphere) {
  const GridSpec g{2, 2.0, 9};
  const auto d = SphericalData::corotational(2, 0.4);
  const auto f = homogeneous_extend(d, g);
  double x[3];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.position(i, x);
    const double r = std::hypot(x[0], x[1]);
    if (r == 0.0) continue;
    EXPECT_NEAR(f.at(0, i), std::sin(0.4) * x[0] / r, 1e-15);
    EXPECT_NEAR(f.at(2, i), std::cos(0.4), 1e-15);
  }
  const std::size_t origin = g.ravel({4, 4, 0});
  // The four neighbours cancel in the equatorial components.
  EXPECT_NEAR(f.at(0, origin), 0.0, 1e-15);
  EXPECT_NEAR(f.at(2, origin), 1.0, 1e-15);
  EXPECT_EQ(f.max_distance(d.target()) < 1e-14, true);
  EXPECT_THROW(homogeneous_extend(d, GridSpec{3, 2.0, 9}), Error);
}

TEST(WeakGradientNorm, MatchesClosedForms) {
  for (double a : {0.0, 0.05, 0.7, 3.0}) {
    EXPECT_NEAR(weak_gradient_norm(SphericalData::corotational(2, a)),
                std::abs(std::sin(a)) * std::sqrt(std::numbers::pi), 1e-9);
    const double n3 = std::cbrt(4.0 * std::numbers::pi / 3.0 * std::pow(2.0, 1.5) * std::pow(std::abs(std::sin(a)), 3));
    EXPECT_NEAR(weak_gradient_norm(SphericalData::corotational(3, a)), n3, 1e-8);
  }
}

TEST(Gradient, ExactForQuarticsInInteriorAndQuadraticsEverywhere) {
  const GridSpec g{2, 2.0, 17};
  const auto f = sample(g, [](const double* x) { return x[0] * x[0] * x[0] * x[1] - 2 * x[1] * x[1] * x[1] * x[1] + x[0]; });
  const auto gr = gradient(f);
  double x[3];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!interior(g, i, 2)) continue;
    g.position(i, x);
    EXPECT_NEAR(gr.at(0, 0, i), 3 * x[0] * x[0] * x[1] + 1, 1e-11);
    EXPECT_NEAR(gr.at(1, 0, i), x[0] * x[0] * x[0] - 8 * x[1] * x[1] * x[1], 1e-11);
  }
  const auto q = sample(g, [](const double* x) { return x[0] * x[0] - 3 * x[0] * x[1] + 2 * x[1]; });
  const auto gq = gradient(q);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.position(i, x);
    EXPECT_NEAR(gq.at(0, 0, i), 2 * x[0] - 3 * x[1], 1e-11);
    EXPECT_NEAR(gq.at(1, 0, i), -3 * x[0] + 2, 1e-11);
  }
}

TEST(Gradient, FourthOrderConvergenceInInterior) {
  double prev = 0.0;
  for (int m : {17, 33, 65}) {
    const GridSpec g{2, 1.0, m};
    const auto f = sample(g, [](const double* x) { return std::sin(2 * x[0]) * std::cos(x[1]); });
    const auto gr = gradient(f);
    double err = 0.0, x[3];
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      if (!interior(g, i, 2)) continue;
      g.position(i, x);
      err = std::max(err, std::abs(gr.at(0, 0, i) - 2 * std::cos(2 * x[0]) * std::cos(x[1])));
    }
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 12.0);
    }
    prev = err;
  }
}

TEST(Gradient, MagnitudeAndJacobianLayout) {
  const GridSpec g{3, 1.0, 7};
  LatticeField f(g, 2);
  double x[3];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    g.position(i, x);
    f.at(0, i) = x[0] + 2 * x[2];
    f.at(1, i) = -x[1];
  }
  const auto gr = gradient(f);
  const auto mag = gr.magnitude();
  for (double v : mag) EXPECT_NEAR(v, std::sqrt(6.0), 1e-12);
  double jac[6];
  gr.jacobian(10, jac);
  // Row = axis, L entries per row.
  EXPECT_NEAR(jac[0], 1.0, 1e-12);
  EXPECT_NEAR(jac[1], 0.0, 1e-12);
  EXPECT_NEAR(jac[3], -1.0, 1e-12);
  EXPECT_NEAR(jac[4], 2.0, 1e-12);
}

TEST(Gradient, TooSmallGridThrows) {
  const GridSpec g{2, 1.0, 3};
  try {
    gradient(LatticeField(g, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridTooSmall);
  }
  EXPECT_THROW(laplacian(LatticeField(g, 1)), Error);
}

TEST(Laplacian, ExactForQuarticsAndConvergent) {
  const GridSpec g{3, 1.5, 13};
  const auto f = sample(g, [](const double* x) { return x[0] * x[0] * x[0] * x[0] + x[1] * x[1] * x[2] - x[2] * x[2]; });
  const auto l = laplacian(f);
  double x[3];
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!interior(g, i, 2)) continue;
    g.position(i, x);
    EXPECT_NEAR(l.at(0, i), 12 * x[0] * x[0] + 2 * x[2] - 2, 1e-10);
  }
  const auto q = sample(g, [](const double* x) { return x[0] * x[0] + x[1] * x[2]; });
  const auto lq = laplacian(q);
  for (std::size_t i = 0; i < g.node_count(); ++i) EXPECT_NEAR(lq.at(0, i), 2.0, 1e-9);
}

TEST(Interpolate, ExactForTensorCubicsAndAtNodes) {
  const GridSpec g{2, 2.0, 9};
  auto cubic = [](const double* x) { return x[0] * x[0] * x[0] - 2 * x[0] * x[1] * x[1] + x[1] * x[1] * x[1] + 1; };
  const auto f = sample(g, cubic);
  SeededRng rng(11);
  for (int k = 0; k < 200; ++k) {
    const double x[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    EXPECT_NEAR(interpolate(f, x)[0], cubic(x), 1e-11);
  }
  double x[3];
  for (std::size_t i = 0; i < g.node_count(); i += 7) {
    g.position(i, x);
    EXPECT_EQ(interpolate(f, std::span<const double>(x, 2))[0], f.at(0, i));
  }
  const double out_of_box[2] = {2.5, 0.0};
  try {
    interpolate(f, out_of_box);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}

TEST(Interpolate, ThreeDimensionalCubic) {
  const GridSpec g{3, 1.0, 7};
  auto cubic = [](const double* x) { return x[0] * x[1] * x[2] + x[2] * x[2] * x[2] - x[0]; };
  const auto f = sample(g, cubic);
  const double x[3] = {0.123, -0.77, 0.456};
  double out;
  interpolate_into(f, x, &out);
  EXPECT_NEAR(out, cubic(x), 1e-12);
}

TEST(FieldIo, BinaryRoundTripIsBitExact) {
  const GridSpec g{3, 2.5, 5};
  LatticeField f(g, 4, 0.123456789, true);
  SeededRng rng(2);
  for (double& v : f.data()) v = rng.uniform(-1.0, 1.0) * 1e-7 + rng.uniform();
  const auto path = temp_path("field.bin");
  write_field_binary(f, path);
  const auto r = read_field_binary(path);
  EXPECT_EQ(r.grid(), g);
  EXPECT_EQ(r.ambient_dim(), 4);
  EXPECT_EQ(r.time_label(), f.time_label());
  EXPECT_TRUE(r.similarity_frame());
  EXPECT_EQ(r.data(), f.data());
  std::filesystem::remove(path);
}

TEST(FieldIo, RejectsForeignAndTruncatedFiles) {
  const auto path = temp_path("junk.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "not a field dump at all";
  }
  try {
    read_field_binary(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
  }
  LatticeField f(GridSpec{2, 1.0, 5}, 2);
  write_field_binary(f, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  try {
    read_field_binary(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(read_field_binary(temp_path("does_not_exist.bin")), Error);
}

TEST(FieldIo, CsvHasHeaderParametersAndRows) {
  LatticeField f(GridSpec{2, 1.0, 3}, 2, 0.5);
  f.at(1, 4) = 0.25;
  const auto path = temp_path("field.csv");
  write_field_csv(f, path);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u + 9u);
  EXPECT_EQ(lines[0], "n,m,R_max,L,time_label");
  EXPECT_EQ(lines[1], "2,3,1,2,0.5");
  EXPECT_EQ(lines[2], "v0,v1");
  EXPECT_EQ(lines[3 + 4], "0,0.25");
  std::filesystem::remove(path);
}
