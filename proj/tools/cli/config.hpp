#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssflow/diagnostics.hpp"
#include "ssflow/duhamel.hpp"
#include "ssflow/equivariant_oracle.hpp"
#include "ssflow/heat_kernel.hpp"

namespace ssflow::cli {

enum class DataKind { Corotational, Tabulated };

/// Everything a run needs. Zero grid sizes select the per-dimension defaults
/// (n = 2: m = 257, R = 8; n = 3: m = 97, R = 6).
struct RunConfig {
  // [run]
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  // [data]
  DataKind data_kind = DataKind::Corotational;
  double alpha = 0.05;
  std::string table_path;
  int table_n_theta = 0;
  int table_n_phi = 1;

  // [grid]
  int dim = 2;
  int points_per_axis = 0;
  double half_width = 0.0;

  // [manifold]
  double tube_radius = 0.5;
  double cutoff_inner = 0.0;  // 0: tube_radius / 2
  double cutoff_outer = 0.0;  // 0: tube_radius

  // [iteration]; [heat_kernel] maps to iteration.caloric
  IterationConfig iteration{};

  // [oracle]
  ShootOptions shoot{};

  // [verify]
  VerifyOptions verify{};

  // [sweep]
  std::vector<double> sweep_alphas{0.02, 0.04, 0.08};
  int probe_pairs = 8;
  bool sweep_decay = true;

  GridSpec grid() const;
  ManifoldDescriptor target() const;
  /// Loads the spherical data (reads the table file for tabulated data).
  SphericalData data() const;
  /// Checks every module precondition; throws ConfigError.
  void validate() const;
};

/// Defaults, then the INI file (when non-empty), then `section.key=value`
/// overrides in order. Unknown sections or keys and malformed values throw
/// ConfigError.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

void apply_override(RunConfig& config, const std::string& assignment);
void set_value(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value);

/// Effective configuration in the INI format accepted by load_config.
void write_config(const RunConfig& config, std::ostream& out);
std::string config_text(const RunConfig& config);

}  // namespace ssflow::cli
