#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssflow/diagnostics.hpp"
#include "ssflow/duhamel.hpp"
#include "ssflow/equivariant_oracle.hpp"
#include "ssflow/heat_kernel.hpp"
#include "ssflow/norms.hpp"

namespace ssflow {

using Json = nlohmann::ordered_json;

/// Version stamped into every JSON document as "schema_version".
inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);

/// Non-finite numbers become JSON null; finite ones are stored as is.
Json json_number(double value);

/// Header `kind`, then `schema_version`, then the body in insertion order.
Json make_document(std::string_view kind);

Json to_json(const GridSpec& grid);
Json to_json(const FixedPointTrace& trace);
Json to_json(const NormReport& report);
Json to_json(const ProfileSolution& profile);
Json to_json(const SemigroupReport& report);
Json to_json(const VerificationReport& report);

/// RFC-4180 style CSV: header row, then rows of numbers.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
/// Columns k, x_norm, increment, theta, dist_N, residual.
void write_trace_csv(const FixedPointTrace& trace, const std::string& path);
/// Columns rho, psi, dpsi.
void write_profile_csv(const ProfileSolution& profile, const std::string& path);
/// Columns t, weak_ratio, l2n_scaled, lp_scaled.
void write_semigroup_csv(const SemigroupReport& report, const std::string& path);

/// Pretty-printed with a trailing newline. Throws IoError.
void write_json(const Json& doc, const std::string& path);
/// Parses and checks schema_version (SchemaMismatch) and, when non-empty, kind.
Json read_json(const std::string& path, std::string_view expected_kind = {});
/// Schema check of an already parsed document.
void check_schema(const Json& doc, std::string_view expected_kind = {});

/// Slices as <dir>/<stem>_<k>.bin plus an index <dir>/<stem>.json.
void write_family(const FieldFamily& family, const std::string& dir, const std::string& stem);
FieldFamily read_family(const std::string& dir, const std::string& stem);

}  // namespace ssflow
