#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"
#include "ssflow/errors.hpp"

namespace ssflow::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitLargeData = 2,
  kExitMaxIter = 3,
};

/// Exit code for a library error escaping a command.
int exit_code_for(ErrorCode code);
/// One-line JSON error record {"error": ..., "message": ...}.
std::string error_record(const Error& error);

/// Picard iteration. Writes config.ini, caloric/v/u families, trace.csv,
/// trace.json, norms.json (on convergence) and solve.json into config.out_dir.
/// 0 converged, 2 ball/tube exit or unbounded source, 3 max_iter.
int cmd_solve(const RunConfig& config, std::ostream& log);

/// Corotational shooting. Writes profile.csv and profile.json.
/// 0 converged, 2 no bracket.
int cmd_oracle(const RunConfig& config, std::ostream& log);

/// Diagnostics on the solution written by solve into solution_dir. Writes
/// verification.json, semigroup.csv, decay.csv, lei.csv and prints a summary.
/// 0 when every check passes, 2 otherwise.
int cmd_verify(const RunConfig& config, const std::string& solution_dir, std::ostream& out,
               std::ostream& log);

/// Per alpha in sweep.alphas: solve, contraction probe, oracle agreement and
/// decay fit. Writes sweep.csv, sweep.json, trace_<k>.csv and profile_<k>.csv.
int cmd_sweep(const RunConfig& config, std::ostream& log);

/// Effective configuration in INI form.
int cmd_print_config(const RunConfig& config, std::ostream& out);

}  // namespace ssflow::cli
