// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "ssflow/diagnostics.hpp"
#include "ssflow/duhamel.hpp"
#include "ssflow/equivariant_oracle.hpp"
#include "ssflow/errors.hpp"
#include "ssflow/heat_kernel.hpp"
#include "ssflow/norms.hpp"
#include "ssflow/parallel.hpp"

using namespace ssflow;
namespace fs = std::filesystem;

namespace {

GridSpec default_grid(int n) { return n == 2 ? GridSpec{2, 8.0, 257} : GridSpec{3, 6.0, 97}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]);
    const double b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  const double k = static_cast<double>(x.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

/// One converged (or not) similarity-frame run, kept for several criteria.
struct Run {
  int n = 2;
  double alpha = 0.0;
  DuhamelSolver solver;
  PicardResult result;

  Run(int dim, double a, GridSpec grid, IterationConfig config)
      : n(dim), alpha(a), solver(SphericalData::corotational(dim, a), grid, config),
        result(solver.picard_iterate()) {}

  bool converged() const { return result.trace.status == IterationStatus::Converged; }
  std::string label() const { return "n=" + std::to_string(n) + " a=" + fmt(alpha); }
};

/// Space-time family of a similarity run on the schedule slices with t <= t_max.
FieldFamily expand_run(const Run& run, double t_max) {
  std::vector<double> times;
  for (double t : run.solver.config().schedule.times())
    if (t <= t_max * (1 + 1e-12)) times.push_back(t);
  return expand_similarity(run.solver.caloric_extension(), run.result.v.slices.back(), run.solver.grid(),
                           times);
}

struct Criterion {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

int failures = 0;

void run_criterion(int id, const std::string& name, const std::function<void(Criterion&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Criterion c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.check(false, std::string("exception: ") + e.what());
  }
  if (!c.pass) ++failures;
  std::printf("%s %2d %s: %s (%.0fs)\n", c.pass ? "PASS" : "FAIL", id, name.c_str(), c.detail.c_str(),
              seconds_since(start));
  std::fflush(stdout);
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    files[fs::relative(entry.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

}  // namespace

int main() {
  set_thread_count(0);
  const IterationConfig defaults{};
  const double delta = defaults.delta;
  const double tube = ManifoldDescriptor::unit_sphere(3).tube_radius;

  std::vector<std::unique_ptr<Run>> runs;
  for (int n : {2, 3})
    for (double a : {0.02, 0.05}) runs.push_back(std::make_unique<Run>(n, a, default_grid(n), defaults));
  auto find_run = [&](int n, double a) -> const Run& {
    for (const auto& r : runs)
      if (r->n == n && r->alpha == a) return *r;
    throw Error(ErrorCode::InvalidArgument, "no such run");
  };

  run_criterion(1, "contraction", [&](Criterion& c) {
    for (int n : {2, 3}) {
      const ProbeResult probe = find_run(n, 0.05).solver.contraction_probe(8, 7);
      c.check(probe.theta < 1.0, "probe n=" + std::to_string(n) + " theta " + fmt(probe.theta));
    }
    for (const auto& r : runs) {
      double worst = 0.0;
      for (const auto& rec : r->result.trace.records)
        if (rec.k >= 3 && std::isfinite(rec.theta)) worst = std::max(worst, rec.theta);
      c.check(r->converged() && worst <= 0.9, r->label() + " increment ratio " + fmt(worst));
    }
  });

  run_criterion(2, "ball", [&](Criterion& c) {
    for (const auto& r : runs) {
      double worst = 0.0;
      for (const auto& rec : r->result.trace.records) worst = std::max(worst, rec.x_norm);
      c.check(r->converged() && worst <= delta, r->label() + " max x_norm " + fmt(worst));
    }
  });

  run_criterion(3, "manifold", [&](Criterion& c) {
    for (const auto& r : runs) {
      const auto& trace = r->result.trace;
      double worst = 0.0;
      for (const auto& rec : trace.records) worst = std::max(worst, rec.dist_n);
      const double final_dist = trace.records.back().dist_n;
      c.check(r->converged() && final_dist <= 1e-3 && trace.projection_defect <= 1e-3 && worst < tube,
              r->label() + " dist " + fmt(final_dist) + " defect " + fmt(trace.projection_defect) +
                  " max " + fmt(worst));
    }
  });

  IterationConfig st_config = defaults;
  st_config.mode = IterationMode::SpaceTime;
  const Run space_time(2, 0.05, default_grid(2), st_config);

  run_criterion(4, "self-similarity", [&](Criterion& c) {
    c.check(space_time.converged(), "space-time status " + std::string(to_string(space_time.result.trace.status)));
    const double d2 = similarity_defect(space_time.result.u, 2.0);
    const double d4 = similarity_defect(space_time.result.u, 4.0);
    c.check(d2 <= 1e-3, "defect(2) " + fmt(d2));
    c.check(d4 <= 2e-3, "defect(4) " + fmt(d4));
  });

  run_criterion(5, "oracle", [&](Criterion& c) {
    for (const auto& r : runs) {
      const GridSpec& g = r->solver.grid();
      const LatticeField lift = lift_profile(shoot(r->n, r->alpha), g);
      const LatticeField& U = r->result.u.slices.back();
      double diff = 0.0;
      for (std::size_t i = 0; i < g.node_count(); ++i) {
        double s = 0.0;
        for (int k = 0; k < U.ambient_dim(); ++k) s += std::pow(U.at(k, i) - lift.at(k, i), 2);
        diff = std::max(diff, std::sqrt(s));
      }
      const double h = g.spacing();
      const double tol = std::max(5e-3, 10 * h * h);
      c.check(r->converged() && diff <= tol, r->label() + " sup diff " + fmt(diff) + " tol " + fmt(tol));
    }
  });

  run_criterion(6, "semigroup", [&](Criterion& c) {
    const std::vector<double> times{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
    for (int n : {2, 3}) {
      const auto report =
          semigroup_estimate_report(SphericalData::corotational(n, 0.05), default_grid(n), times, 4.0 * n);
      const std::string tag = "n=" + std::to_string(n);
      c.check(report.max_weak_ratio() <= 1.05, tag + " weak ratio " + fmt(report.max_weak_ratio()));
      c.check(report.l2n_spread() <= 2.0 && report.lp_spread() <= 2.0,
              tag + " spreads " + fmt(report.l2n_spread()) + "/" + fmt(report.lp_spread()));
    }
  });

  std::vector<std::pair<std::string, FieldFamily>> families;
  families.emplace_back("space-time n=2", space_time.result.u);
  for (int n : {2, 3}) families.emplace_back("frame n=" + std::to_string(n), expand_run(find_run(n, 0.05), 0.5));

  run_criterion(7, "local energy", [&](Criterion& c) {
    const VerifyOptions options{};
    for (const auto& [name, u] : families) {
      const int n = u.grid().dim;
      const EnergyDensities dens = energy_densities(u, SphericalData::corotational(n, 0.05).target(), 0.25);
      double worst = 0.0;
      int cylinders = 0;
      for (const auto& center : options.lei_centers) {
        for (double radius : options.lei_radii) {
          const LeiResult r = local_energy_check(dens, std::span<const double>(center.data(), n), radius);
          worst = std::max(worst, r.lhs / r.rhs);
          ++cylinders;
        }
      }
      c.check(cylinders == 6 && worst <= 1.05, name + " max lhs/rhs " + fmt(worst));
    }
  });

  run_criterion(8, "regularity", [&](Criterion& c) {
    const VerifyOptions options{};
    const auto radii = geometric_radii(options.decay_r0, options.decay_factor, options.decay_count);
    for (const auto& [name, u] : families) {
      const int n = u.grid().dim;
      const double center[3] = {1.0, 0.0, 0.0};
      const DecayFit fit = decay_exponent_fit(gradient_samples(u), std::span<const double>(center, n), radii);
      c.check(fit.exponent >= 2.0 / n - 0.2, name + " decay " + fmt(fit.exponent));
    }
    HolderOptions holder;
    holder.gamma = 0.5;
    const double coarse = holder_seminorm(expand_run(find_run(2, 0.05), 1.0 / 16.0), holder);
    const Run fine(2, 0.05, GridSpec{2, 8.0, 513}, defaults);
    const double refined = holder_seminorm(expand_run(fine, 1.0 / 16.0), holder);
    const double ratio = refined / coarse;
    c.check(std::isfinite(coarse) && std::isfinite(refined) && ratio >= 0.75 && ratio <= 1.25,
            "holder(1/2) m=257 " + fmt(coarse) + " m=513 " + fmt(refined));
  });

  run_criterion(9, "quadratic scaling", [&](Criterion& c) {
    const std::vector<double> alphas{0.02, 0.04, 0.08};
    std::vector<double> norms;
    for (double a : alphas) {
      const Run r(2, a, default_grid(2), defaults);
      c.check(r.converged(), "a=" + fmt(a) + " x_norm " + fmt(r.result.trace.records.back().x_norm));
      norms.push_back(r.result.trace.records.back().x_norm);
    }
    const double slope = log_slope(alphas, norms);
    c.check(std::abs(slope - 2.0) <= 0.3, "slope " + fmt(slope));
  });

  run_criterion(10, "refinement", [&](Criterion& c) {
    std::vector<double> pde;
    for (auto [m, ratio] : {std::pair{129, std::pow(2.0, 0.25)}, std::pair{257, std::pow(2.0, 0.125)}}) {
      IterationConfig cfg = st_config;
      cfg.schedule.ratio = ratio;
      const Run r(2, 0.05, GridSpec{2, 8.0, m}, cfg);
      pde.push_back(pde_residual(r.result.u, r.solver.target()).sup);
      c.check(r.converged(), "m=" + std::to_string(m) + " pde " + fmt(pde.back()));
    }
    const double pde_order = std::log2(pde[0] / pde[1]);
    c.check(pde_order >= 1.5, "pde order " + fmt(pde_order));

    IterationConfig ref_cfg = defaults;
    ref_cfg.quad_panels = 256;
    const DuhamelSolver reference(SphericalData::corotational(2, 0.05), default_grid(2), ref_cfg);
    std::vector<double> residual;
    for (int panels : {4, 8, 16}) {
      IterationConfig cfg = defaults;
      cfg.quad_panels = panels;
      const Run r(2, 0.05, default_grid(2), cfg);
      residual.push_back(reference.duhamel_residual(r.result.v));
      c.check(r.converged(), "P=" + std::to_string(panels) + " duhamel " + fmt(residual.back()));
    }
    for (std::size_t k = 1; k < residual.size(); ++k) {
      const double shrink = residual[k - 1] / residual[k];
      c.check(shrink >= 4.0 && std::log2(shrink) >= 1.5, "shrink " + fmt(shrink));
    }
  });

  run_criterion(11, "determinism", [&](Criterion& c) {
    const fs::path root = fs::current_path() / "acceptance_determinism";
    fs::remove_all(root);
    std::vector<std::map<std::string, std::string>> trees;
    for (const char* leaf : {"a", "b"}) {
      cli::RunConfig config;
      config.out_dir = (root / leaf).string();
      config.seed = 11;
      std::ostringstream log;
      const int code = cli::cmd_solve(config, log);
      c.check(code == cli::kExitOk, std::string("run ") + leaf + " exit " + std::to_string(code));
      auto tree = read_tree(root / leaf);
      tree.erase("config.ini");
      trees.push_back(std::move(tree));
    }
    c.check(trees[0].size() > 3 && trees[0] == trees[1], std::to_string(trees[0].size()) + " artifacts identical");
    fs::remove_all(root);
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
