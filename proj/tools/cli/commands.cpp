#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "ssflow/diagnostics.hpp"
#include "ssflow/duhamel.hpp"
#include "ssflow/equivariant_oracle.hpp"
#include "ssflow/io.hpp"
#include "ssflow/norms.hpp"
#include "ssflow/parallel.hpp"

namespace ssflow::cli {

namespace fs = std::filesystem;

namespace {

std::string path_in(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void prepare(const RunConfig& config) {
  config.validate();
  set_thread_count(config.threads);
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  require(!ec, ErrorCode::IoError, "cannot create output directory " + config.out_dir);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path);
  out << text;
}

int exit_code_for(IterationStatus status) {
  switch (status) {
    case IterationStatus::Converged:
      return kExitOk;
    case IterationStatus::LeftBall:
    case IterationStatus::LeftTube:
      return kExitLargeData;
    case IterationStatus::MaxIter:
      return kExitMaxIter;
  }
  return kExitConfig;
}

double default_gamma(const RunConfig& config) {
  return config.verify.holder.gamma > 0.0 ? config.verify.holder.gamma : 1.0 / config.dim;
}

/// Schedule times plus t = 0 as a space-time family of u.
FieldFamily expand_solution(const DuhamelSolver& solver, const FieldFamily& v) {
  if (solver.config().mode == IterationMode::SpaceTime) return solver.assemble(v);
  const auto times = solver.config().schedule.times();
  return expand_similarity(solver.caloric_extension(), v.slices.back(), solver.grid(), times);
}

/// sup over lattice nodes of |U - lift(profile)| for the t = 1 slice.
double oracle_difference(const LatticeField& u1, const ProfileSolution& profile) {
  const LatticeField lift = lift_profile(profile, u1.grid());
  double best = 0.0;
  for (std::size_t i = 0; i < u1.node_count(); ++i) {
    double s = 0.0;
    for (int c = 0; c < u1.ambient_dim(); ++c) s += std::pow(u1.at(c, i) - lift.at(c, i), 2);
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

const LatticeField& unit_time_slice(const FieldFamily& u) {
  const int k = u.find(1.0);
  require(k >= 0, ErrorCode::InvalidArgument, "solution has no t = 1 slice");
  return u.slices[static_cast<std::size_t>(k)];
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
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

Json config_json(const RunConfig& config) {
  Json j;
  j["n"] = config.dim;
  j["data"] = config.data_kind == DataKind::Corotational ? "corotational" : "tabulated";
  j["alpha"] = config.alpha;
  j["grid"] = to_json(config.grid());
  j["mode"] = std::string(to_string(config.iteration.mode));
  j["seed"] = config.seed;
  return j;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoBracket:
    case ErrorCode::SourceUnbounded:
    case ErrorCode::BlowUp:
    case ErrorCode::OutsideTube:
      return kExitLargeData;
    default:
      return kExitConfig;
  }
}

std::string error_record(const Error& error) {
  Json j;
  j["error"] = std::string(to_string(error.code()));
  j["message"] = error.what();
  return j.dump();
}

int cmd_print_config(const RunConfig& config, std::ostream& out) {
  config.validate();
  write_config(config, out);
  return kExitOk;
}

int cmd_solve(const RunConfig& config, std::ostream& log) {
  prepare(config);
  const std::string& dir = config.out_dir;
  write_text(path_in(dir, "config.ini"), config_text(config));

  Json summary = make_document("solve_summary");
  summary["config"] = config_json(config);
  Json warnings = Json::array();

  DuhamelSolver solver(config.data(), config.grid(), config.iteration);
  const double smallness = solver.data_gradient_weak_norm();
  summary["data_grad_weak_norm"] = smallness;
  if (smallness > 0.5 * config.iteration.delta) {
    const std::string w = "weak L^n norm of grad u0 (" + format_double(smallness) +
                          ") exceeds delta / 2; the contraction regime is not guaranteed";
    warnings.push_back(w);
    log << "warning: " << w << '\n';
  }
  write_family(solver.caloric(), dir, "caloric");

  PicardResult result;
  try {
    result = solver.picard_iterate();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SourceUnbounded) throw;
    summary["status"] = "source_unbounded";
    summary["exit_code"] = kExitLargeData;
    summary["message"] = e.what();
    summary["warnings"] = std::move(warnings);
    write_json(summary, path_in(dir, "solve.json"));
    log << "source unbounded: " << e.what() << '\n';
    return kExitLargeData;
  }

  const int code = exit_code_for(result.trace.status);
  write_trace_csv(result.trace, path_in(dir, "trace.csv"));
  write_json(to_json(result.trace), path_in(dir, "trace.json"));
  write_family(result.v, dir, "v");
  write_family(result.u, dir, "u");

  summary["status"] = std::string(to_string(result.trace.status));
  summary["exit_code"] = code;
  summary["iterations"] = static_cast<int>(result.trace.records.size());
  summary["final_x_norm"] = json_number(result.trace.records.back().x_norm);
  summary["projection_defect"] = json_number(result.trace.projection_defect);

  if (result.trace.status == IterationStatus::Converged) {
    NormReportOptions nopts;
    nopts.holder = config.verify.holder;
    nopts.holder.gamma = default_gamma(config);
    nopts.holder.seed = config.seed;
    const FieldFamily u = expand_solution(solver, result.v);
    write_json(to_json(compute_norm_report(u, result.v, nopts)), path_in(dir, "norms.json"));
  }
  summary["warnings"] = std::move(warnings);
  write_json(summary, path_in(dir, "solve.json"));
  log << "solve: " << to_string(result.trace.status) << " after " << result.trace.records.size()
      << " iterations, ||v||_X = " << format_double(result.trace.records.back().x_norm) << '\n';
  return code;
}

int cmd_oracle(const RunConfig& config, std::ostream& log) {
  prepare(config);
  require(config.data_kind == DataKind::Corotational, ErrorCode::ConfigError,
          "the profile oracle needs corotational data");
  ProfileSolution profile;
  try {
    profile = shoot(config.dim, config.alpha, config.shoot);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracket && e.code() != ErrorCode::BlowUp) throw;
    Json doc = make_document("profile");
    doc["n"] = config.dim;
    doc["alpha"] = config.alpha;
    doc["converged"] = false;
    doc["message"] = e.what();
    write_json(doc, path_in(config.out_dir, "profile.json"));
    log << "oracle: " << e.what() << '\n';
    return kExitLargeData;
  }
  write_profile_csv(profile, path_in(config.out_dir, "profile.csv"));
  write_json(to_json(profile), path_in(config.out_dir, "profile.json"));
  log << "oracle: slope " << format_double(profile.slope) << ", psi_inf "
      << format_double(profile.psi_inf) << '\n';
  return profile.converged ? kExitOk : kExitLargeData;
}

int cmd_verify(const RunConfig& config, const std::string& solution_dir, std::ostream& out,
               std::ostream& log) {
  prepare(config);
  const Json solved = read_json(path_in(solution_dir, "solve.json"), "solve_summary");
  require(solved.at("status") == "converged", ErrorCode::ConfigError,
          "verify needs a converged solution");
  const FieldFamily v = read_family(solution_dir, "v");
  const GridSpec grid = config.grid();
  require(v.grid() == grid, ErrorCode::ConfigError, "solution grid differs from the configured grid");

  IterationConfig it = config.iteration;
  const bool similarity = v.slices.size() == 2 && v.slices.back().similarity_frame();
  it.mode = similarity ? IterationMode::SimilarityFrame : IterationMode::SpaceTime;
  const SphericalData data = config.data();

  FieldFamily u;
  if (similarity) {
    const CaloricExtension caloric(data, it.caloric);
    u = expand_similarity(caloric, v.slices.back(), grid, it.schedule.times());
  } else {
    u = read_family(solution_dir, "u");
  }
  const LatticeField& profile = unit_time_slice(u);

  VerifyOptions options = config.verify;
  options.holder.gamma = default_gamma(config);
  options.holder.seed = config.seed;
  const VerificationReport report = run_verification(u, data, &profile, options);

  const std::string& dir = config.out_dir;
  write_json(to_json(report), path_in(dir, "verification.json"));
  if (report.semigroup) write_semigroup_csv(*report.semigroup, path_in(dir, "semigroup.csv"));
  std::vector<std::vector<double>> decay_rows;
  for (std::size_t f = 0; f < report.decay_fits.size(); ++f) {
    const auto& fit = report.decay_fits[f];
    for (std::size_t k = 0; k < fit.radii.size(); ++k) {
      const double e = k < fit.energies.size() ? fit.energies[k] : std::numeric_limits<double>::quiet_NaN();
      decay_rows.push_back({static_cast<double>(f), fit.center[0], fit.center[1], fit.center[2],
                            fit.radii[k], e, fit.exponent});
    }
  }
  write_csv(path_in(dir, "decay.csv"), {"fit", "x0", "x1", "x2", "radius", "energy", "exponent"},
            decay_rows);
  std::vector<std::vector<double>> lei_rows;
  for (const auto& r : report.lei)
    lei_rows.push_back({r.center[0], r.center[1], r.center[2], r.radius, r.lhs, r.rhs, r.slack});
  write_csv(path_in(dir, "lei.csv"), {"x0", "x1", "x2", "radius", "lhs", "rhs", "slack"}, lei_rows);

  out << "pde_residual        " << format_double(report.pde_residual) << '\n';
  for (const auto& [l, d] : report.similarity_defect)
    out << "similarity_defect(" << format_double(l) << ") " << format_double(d) << '\n';
  for (const auto& r : report.lei)
    out << "lei R=" << format_double(r.radius) << " lhs " << format_double(r.lhs) << " rhs "
        << format_double(r.rhs) << '\n';
  for (const auto& f : report.decay_fits) out << "decay exponent      " << format_double(f.exponent) << '\n';
  out << "holder(" << format_double(report.holder_gamma) << ")        " << format_double(report.holder)
      << '\n';
  if (report.semigroup) {
    out << "semigroup weak max  " << format_double(report.semigroup->max_weak_ratio()) << '\n';
    out << "semigroup spreads   " << format_double(report.semigroup->l2n_spread()) << ' '
        << format_double(report.semigroup->lp_spread()) << '\n';
  }
  for (const auto& s : report.smoothness)
    out << "|D^" << s.order << " U| on B_" << format_double(s.radius) << "  " << format_double(s.value)
        << '\n';
  for (const auto& [name, ok] : report.pass_flags) out << (ok ? "PASS " : "FAIL ") << name << '\n';
  log << "verify: " << (report.all_pass() ? "all checks pass" : "some checks fail") << '\n';
  return report.all_pass() ? kExitOk : kExitLargeData;
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  prepare(config);
  require(config.data_kind == DataKind::Corotational, ErrorCode::ConfigError,
          "sweeps run over corotational data");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> rows;
  Json runs = Json::array();
  std::vector<double> fit_alpha, fit_x;

  for (std::size_t k = 0; k < config.sweep_alphas.size(); ++k) {
    RunConfig c = config;
    c.alpha = config.sweep_alphas[k];
    Json run;
    run["alpha"] = c.alpha;
    double x_norm = nan, theta = nan, oracle = nan, decay = nan;
    int code = kExitOk;
    int iterations = 0;
    std::string status;

    DuhamelSolver solver(c.data(), c.grid(), c.iteration);
    PicardResult result;
    try {
      result = solver.picard_iterate();
      status = std::string(to_string(result.trace.status));
      code = exit_code_for(result.trace.status);
      iterations = static_cast<int>(result.trace.records.size());
      x_norm = result.trace.records.back().x_norm;
      write_trace_csv(result.trace, path_in(c.out_dir, "trace_" + std::to_string(k) + ".csv"));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SourceUnbounded) throw;
      status = "source_unbounded";
      code = kExitLargeData;
    }

    const ProbeResult probe = solver.contraction_probe(c.probe_pairs, c.seed);
    theta = probe.theta;

    try {
      const ProfileSolution profile = shoot(c.dim, c.alpha, c.shoot);
      write_profile_csv(profile, path_in(c.out_dir, "profile_" + std::to_string(k) + ".csv"));
      if (code == kExitOk) oracle = oracle_difference(unit_time_slice(result.u), profile);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoBracket) throw;
    }

    if (code == kExitOk && c.sweep_decay) {
      const FieldFamily u = expand_solution(solver, result.v);
      const GradientSamples samples = gradient_samples(u);
      const auto& center = c.verify.decay_centers.front();
      const auto radii = geometric_radii(c.verify.decay_r0, c.verify.decay_factor, c.verify.decay_count);
      try {
        decay = decay_exponent_fit(samples, std::span<const double>(center.data(), c.dim), radii).exponent;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateFit) throw;
        decay = std::numeric_limits<double>::infinity();
      }
    }
    if (code == kExitOk && x_norm > 0.0) {
      fit_alpha.push_back(c.alpha);
      fit_x.push_back(x_norm);
    }

    rows.push_back({c.alpha, static_cast<double>(code), static_cast<double>(iterations), x_norm, theta,
                    oracle, decay});
    run["status"] = status;
    run["exit_code"] = code;
    run["iterations"] = iterations;
    run["x_norm"] = json_number(x_norm);
    run["theta_probe"] = json_number(theta);
    run["oracle_difference"] = json_number(oracle);
    run["decay_exponent"] = json_number(decay);
    runs.push_back(std::move(run));
    log << "sweep: alpha " << format_double(c.alpha) << " -> " << status << '\n';
  }

  write_csv(path_in(config.out_dir, "sweep.csv"),
            {"alpha", "exit_code", "iterations", "x_norm", "theta_probe", "oracle_difference",
             "decay_exponent"},
            rows);
  Json doc = make_document("sweep_summary");
  doc["config"] = config_json(config);
  doc["x_norm_alpha_slope"] = json_number(least_squares_slope(fit_alpha, fit_x));
  doc["runs"] = std::move(runs);
  write_json(doc, path_in(config.out_dir, "sweep.json"));
  return kExitOk;
}

}  // namespace ssflow::cli
