#include "ssflow/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ssflow/errors.hpp"

namespace ssflow {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

Json make_document(std::string_view kind) {
  Json doc;
  doc["kind"] = std::string(kind);
  doc["schema_version"] = kSchemaVersion;
  return doc;
}

Json to_json(const GridSpec& grid) {
  Json j;
  j["n"] = grid.dim;
  j["m"] = grid.points_per_axis;
  j["R_max"] = grid.half_width;
  j["h"] = grid.spacing();
  return j;
}

Json to_json(const FixedPointTrace& trace) {
  Json doc = make_document("fixed_point_trace");
  doc["status"] = std::string(to_string(trace.status));
  doc["iterations"] = static_cast<int>(trace.records.size());
  doc["projection_defect"] = json_number(trace.projection_defect);
  if (!trace.records.empty()) {
    const auto& last = trace.records.back();
    doc["final_x_norm"] = json_number(last.x_norm);
    doc["final_increment"] = json_number(last.increment);
    doc["final_dist_N"] = json_number(last.dist_n);
    double max_theta = 0.0;
    double max_x = 0.0;
    double max_dist = 0.0;
    for (const auto& r : trace.records) {
      if (r.k >= 3 && std::isfinite(r.theta)) max_theta = std::max(max_theta, r.theta);
      max_x = std::max(max_x, r.x_norm);
      max_dist = std::max(max_dist, r.dist_n);
    }
    doc["max_theta_k_ge_3"] = max_theta;
    doc["max_x_norm"] = max_x;
    doc["max_dist_N"] = max_dist;
  }
  Json rows = Json::array();
  for (const auto& r : trace.records) {
    Json row;
    row["k"] = r.k;
    row["x_norm"] = json_number(r.x_norm);
    row["increment"] = json_number(r.increment);
    row["theta"] = json_number(r.theta);
    row["dist_N"] = json_number(r.dist_n);
    row["residual"] = json_number(r.residual);
    rows.push_back(std::move(row));
  }
  doc["records"] = std::move(rows);
  return doc;
}

namespace {

std::string exponent_key(double p) { return std::isinf(p) ? "inf" : format_double(p); }

Json center_json(const std::array<double, 3>& c, int n) {
  Json a = Json::array();
  for (int i = 0; i < n; ++i) a.push_back(c[i]);
  return a;
}

}  // namespace

Json to_json(const NormReport& report) {
  Json doc = make_document("norm_report");
  Json lp;
  for (const auto& [p, v] : report.lp) lp[exponent_key(p)] = json_number(v);
  Json weak;
  for (const auto& [p, v] : report.weak_lp) weak[exponent_key(p)] = json_number(v);
  doc["grad_lp"] = std::move(lp);
  doc["grad_weak_lp"] = std::move(weak);
  doc["x_norm"] = json_number(report.x_norm);
  doc["bmo"] = json_number(report.bmo);
  Json energies = Json::array();
  for (const auto& e : report.energies) {
    Json row;
    row["center"] = center_json(e.center, 3);
    row["radius"] = e.radius;
    row["energy_2"] = json_number(e.energy_2);
    row["energy_n"] = json_number(e.energy_n);
    energies.push_back(std::move(row));
  }
  doc["energies"] = std::move(energies);
  doc["holder_gamma"] = report.holder_gamma;
  doc["holder"] = json_number(report.holder);
  return doc;
}

Json to_json(const ProfileSolution& profile) {
  Json doc = make_document("profile");
  doc["n"] = profile.dim;
  doc["alpha"] = profile.alpha;
  doc["slope"] = profile.slope;
  doc["psi_inf"] = profile.psi_inf;
  doc["converged"] = profile.converged;
  doc["tail_fit"] = json_number(profile.tail_fit);
  doc["iterations"] = profile.iterations;
  doc["samples"] = static_cast<int>(profile.samples.rho.size());
  doc["rho_max"] = profile.samples.rho.empty() ? 0.0 : profile.samples.rho.back();
  return doc;
}

Json to_json(const SemigroupReport& report) {
  Json doc = make_document("semigroup_report");
  doc["n"] = report.dim;
  doc["p"] = report.p;
  doc["weak_u0"] = json_number(report.weak_u0);
  doc["max_weak_ratio"] = json_number(report.max_weak_ratio());
  doc["l2n_spread"] = json_number(report.l2n_spread());
  doc["lp_spread"] = json_number(report.lp_spread());
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["t"] = r.t;
    row["weak_ratio"] = json_number(r.weak_ratio);
    row["l2n_scaled"] = json_number(r.l2n_scaled);
    row["lp_scaled"] = json_number(r.lp_scaled);
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

Json to_json(const VerificationReport& report) {
  Json doc = make_document("verification_report");
  doc["all_pass"] = report.all_pass();
  Json flags;
  for (const auto& [k, v] : report.pass_flags) flags[k] = v;
  doc["pass_flags"] = std::move(flags);
  doc["pde_residual"] = json_number(report.pde_residual);
  Json defect;
  for (const auto& [l, v] : report.similarity_defect) defect[format_double(l)] = json_number(v);
  doc["similarity_defect"] = std::move(defect);
  Json lei = Json::array();
  for (const auto& r : report.lei) {
    Json row;
    row["center"] = center_json(r.center, 3);
    row["radius"] = r.radius;
    row["lhs"] = json_number(r.lhs);
    row["rhs"] = json_number(r.rhs);
    row["slack"] = json_number(r.slack);
    lei.push_back(std::move(row));
  }
  doc["local_energy"] = std::move(lei);
  Json decay = Json::array();
  for (const auto& f : report.decay_fits) {
    Json row;
    row["center"] = center_json(f.center, 3);
    row["radii"] = f.radii;
    Json e = Json::array();
    for (double v : f.energies) e.push_back(json_number(v));
    row["energies"] = std::move(e);
    row["exponent"] = json_number(f.exponent);
    decay.push_back(std::move(row));
  }
  doc["decay_fits"] = std::move(decay);
  doc["holder_gamma"] = report.holder_gamma;
  doc["holder"] = json_number(report.holder);
  if (report.semigroup) {
    Json sg = to_json(*report.semigroup);
    sg.erase("kind");
    sg.erase("schema_version");
    doc["semigroup"] = std::move(sg);
  } else {
    doc["semigroup"] = nullptr;
  }
  Json smooth = Json::array();
  for (const auto& s : report.smoothness) {
    Json row;
    row["order"] = s.order;
    row["radius"] = s.radius;
    row["value"] = json_number(s.value);
    smooth.push_back(std::move(row));
  }
  doc["smoothness"] = std::move(smooth);
  return doc;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows)
    require(row.size() == header.size(), ErrorCode::InvalidArgument, "CSV row width differs from the header");
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\r\n";
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed: " + path);
}

void write_trace_csv(const FixedPointTrace& trace, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : trace.records)
    rows.push_back({static_cast<double>(r.k), r.x_norm, r.increment, r.theta, r.dist_n, r.residual});
  write_csv(path, {"k", "x_norm", "increment", "theta", "dist_N", "residual"}, rows);
}

void write_profile_csv(const ProfileSolution& profile, const std::string& path) {
  std::vector<std::vector<double>> rows;
  const auto& s = profile.samples;
  for (std::size_t i = 0; i < s.rho.size(); ++i) rows.push_back({s.rho[i], s.psi[i], s.dpsi[i]});
  write_csv(path, {"rho", "psi", "dpsi"}, rows);
}

void write_semigroup_csv(const SemigroupReport& report, const std::string& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : report.rows) rows.push_back({r.t, r.weak_ratio, r.l2n_scaled, r.lp_scaled});
  write_csv(path, {"t", "weak_ratio", "l2n_scaled", "lp_scaled"}, rows);
}

void write_json(const Json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path);
  out << doc.dump(2) << '\n';
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed: " + path);
}

void check_schema(const Json& doc, std::string_view expected_kind) {
  require(doc.is_object() && doc.contains("schema_version") && doc["schema_version"].is_number_integer(),
          ErrorCode::SchemaMismatch, "document has no schema_version");
  const int version = doc["schema_version"].get<int>();
  require(version == kSchemaVersion, ErrorCode::SchemaMismatch,
          "unsupported schema_version " + std::to_string(version));
  if (!expected_kind.empty()) {
    require(doc.contains("kind") && doc["kind"].is_string() &&
                doc["kind"].get<std::string>() == expected_kind,
            ErrorCode::SchemaMismatch, "expected a document of kind " + std::string(expected_kind));
  }
}

Json read_json(const std::string& path, std::string_view expected_kind) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path);
  Json doc = Json::parse(in, nullptr, false);
  require(!doc.is_discarded(), ErrorCode::SchemaMismatch, "malformed JSON in " + path);
  check_schema(doc, expected_kind);
  return doc;
}

void write_family(const FieldFamily& family, const std::string& dir, const std::string& stem) {
  require(!family.slices.empty(), ErrorCode::InvalidArgument, "empty family");
  std::filesystem::create_directories(dir);
  Json doc = make_document("field_family");
  doc["grid"] = to_json(family.grid());
  doc["ambient_dim"] = family.slices.front().ambient_dim();
  Json slices = Json::array();
  for (std::size_t k = 0; k < family.slices.size(); ++k) {
    const std::string file = stem + "_" + std::to_string(k) + ".bin";
    write_field_binary(family.slices[k], (std::filesystem::path(dir) / file).string());
    Json s;
    s["t"] = family.slices[k].time_label();
    s["file"] = file;
    slices.push_back(std::move(s));
  }
  doc["slices"] = std::move(slices);
  write_json(doc, (std::filesystem::path(dir) / (stem + ".json")).string());
}

FieldFamily read_family(const std::string& dir, const std::string& stem) {
  const Json doc = read_json((std::filesystem::path(dir) / (stem + ".json")).string(), "field_family");
  FieldFamily family;
  for (const auto& s : doc.at("slices")) {
    const auto file = (std::filesystem::path(dir) / s.at("file").get<std::string>()).string();
    family.slices.push_back(read_field_binary(file));
  }
  require(!family.slices.empty(), ErrorCode::SchemaMismatch, "family index lists no slices");
  return family;
}

}  // namespace ssflow
