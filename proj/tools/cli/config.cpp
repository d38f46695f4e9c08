#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ssflow/errors.hpp"
#include "ssflow/io.hpp"

namespace ssflow::cli {

namespace {

[[noreturn]] void bad_value(const std::string& section, const std::string& key, const std::string& value) {
  fail(ErrorCode::ConfigError, "invalid value '" + value + "' for " + section + "." + key);
}

double parse_double(const std::string& s, const std::string& section, const std::string& key) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) bad_value(section, key, s);
  return v;
}

long long parse_int(const std::string& s, const std::string& section, const std::string& key) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) bad_value(section, key, s);
  return v;
}

bool parse_bool(const std::string& s, const std::string& section, const std::string& key) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  bad_value(section, key, s);
}

std::vector<double> parse_list(const std::string& s, const std::string& section, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) bad_value(section, key, s);
    out.push_back(parse_double(item.substr(b, e - b + 1), section, key));
  }
  if (out.empty()) bad_value(section, key, s);
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

struct Entry {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SSFLOW_DOUBLE(sec, name, field)                                                   \
  Entry {                                                                                 \
    sec, name, [](RunConfig& c, const std::string& v) { c.field = parse_double(v, sec, name); }, \
        [](const RunConfig& c) { return format_double(c.field); }                         \
  }
#define SSFLOW_INT(sec, name, field)                                                      \
  Entry {                                                                                 \
    sec, name,                                                                            \
        [](RunConfig& c, const std::string& v) {                                          \
          c.field = static_cast<decltype(c.field)>(parse_int(v, sec, name));              \
        },                                                                                \
        [](const RunConfig& c) { return std::to_string(c.field); }                        \
  }
#define SSFLOW_BOOL(sec, name, field)                                                     \
  Entry {                                                                                 \
    sec, name, [](RunConfig& c, const std::string& v) { c.field = parse_bool(v, sec, name); }, \
        [](const RunConfig& c) { return format_bool(c.field); }                           \
  }

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      Entry{"run", "out", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
            [](const RunConfig& c) { return c.out_dir; }},
      Entry{"run", "seed",
            [](RunConfig& c, const std::string& v) {
              const long long s = parse_int(v, "run", "seed");
              if (s < 0) bad_value("run", "seed", v);
              c.seed = static_cast<std::uint64_t>(s);
            },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      SSFLOW_INT("run", "threads", threads),

      Entry{"data", "kind",
            [](RunConfig& c, const std::string& v) {
              if (v == "corotational")
                c.data_kind = DataKind::Corotational;
              else if (v == "tabulated")
                c.data_kind = DataKind::Tabulated;
              else
                bad_value("data", "kind", v);
            },
            [](const RunConfig& c) {
              return std::string(c.data_kind == DataKind::Corotational ? "corotational" : "tabulated");
            }},
      SSFLOW_DOUBLE("data", "alpha", alpha),
      Entry{"data", "table", [](RunConfig& c, const std::string& v) { c.table_path = v; },
            [](const RunConfig& c) { return c.table_path; }},
      SSFLOW_INT("data", "n_theta", table_n_theta),
      SSFLOW_INT("data", "n_phi", table_n_phi),

      SSFLOW_INT("grid", "dim", dim),
      SSFLOW_INT("grid", "m", points_per_axis),
      SSFLOW_DOUBLE("grid", "r_max", half_width),

      SSFLOW_DOUBLE("manifold", "tube_radius", tube_radius),
      SSFLOW_DOUBLE("manifold", "cutoff_inner", cutoff_inner),
      SSFLOW_DOUBLE("manifold", "cutoff_outer", cutoff_outer),

      SSFLOW_INT("heat_kernel", "theta_points", iteration.caloric.theta_points),
      SSFLOW_INT("heat_kernel", "phi_points", iteration.caloric.phi_points),
      SSFLOW_DOUBLE("heat_kernel", "window", iteration.caloric.window),

      Entry{"iteration", "mode",
            [](RunConfig& c, const std::string& v) {
              try {
                c.iteration.mode = iteration_mode_from_string(v);
              } catch (const Error&) {
                bad_value("iteration", "mode", v);
              }
            },
            [](const RunConfig& c) { return std::string(to_string(c.iteration.mode)); }},
      SSFLOW_DOUBLE("iteration", "delta", iteration.delta),
      SSFLOW_INT("iteration", "max_iter", iteration.max_iter),
      SSFLOW_DOUBLE("iteration", "tol_fix", iteration.tol_fix),
      SSFLOW_DOUBLE("iteration", "t_min", iteration.schedule.t_min),
      SSFLOW_DOUBLE("iteration", "t_max", iteration.schedule.t_max),
      SSFLOW_DOUBLE("iteration", "ratio", iteration.schedule.ratio),
      SSFLOW_INT("iteration", "quad_panels", iteration.quad_panels),
      SSFLOW_DOUBLE("iteration", "source_cap", iteration.source_cap),

      SSFLOW_DOUBLE("oracle", "tol_shoot", shoot.tol_shoot),
      SSFLOW_DOUBLE("oracle", "max_slope", shoot.max_slope),
      SSFLOW_DOUBLE("oracle", "rho0", shoot.profile.rho0),
      SSFLOW_DOUBLE("oracle", "rho_max", shoot.profile.rho_max),
      SSFLOW_DOUBLE("oracle", "output_step", shoot.profile.output_step),

      SSFLOW_BOOL("verify", "semigroup", verify.semigroup),
      SSFLOW_DOUBLE("verify", "pde_residual_max", verify.thresholds.pde_residual),
      Entry{"verify", "defect2_max",
            [](RunConfig& c, const std::string& v) {
              c.verify.thresholds.defect[2.0] = parse_double(v, "verify", "defect2_max");
            },
            [](const RunConfig& c) { return format_double(c.verify.thresholds.defect.at(2.0)); }},
      Entry{"verify", "defect4_max",
            [](RunConfig& c, const std::string& v) {
              c.verify.thresholds.defect[4.0] = parse_double(v, "verify", "defect4_max");
            },
            [](const RunConfig& c) { return format_double(c.verify.thresholds.defect.at(4.0)); }},
      SSFLOW_DOUBLE("verify", "lei_slack", verify.thresholds.lei_relative_slack),
      SSFLOW_DOUBLE("verify", "decay_margin", verify.thresholds.decay_margin),
      SSFLOW_DOUBLE("verify", "semigroup_weak_max", verify.thresholds.semigroup_weak_ratio),
      SSFLOW_DOUBLE("verify", "semigroup_spread_max", verify.thresholds.semigroup_spread),
      SSFLOW_DOUBLE("verify", "holder_gamma", verify.holder.gamma),
      SSFLOW_INT("verify", "holder_pairs", verify.holder.pairs),

      Entry{"sweep", "alphas",
            [](RunConfig& c, const std::string& v) { c.sweep_alphas = parse_list(v, "sweep", "alphas"); },
            [](const RunConfig& c) { return format_list(c.sweep_alphas); }},
      SSFLOW_INT("sweep", "probe_pairs", probe_pairs),
      SSFLOW_BOOL("sweep", "decay", sweep_decay),
  };
  return entries;
}

#undef SSFLOW_DOUBLE
#undef SSFLOW_INT
#undef SSFLOW_BOOL

}  // namespace

GridSpec RunConfig::grid() const {
  GridSpec g;
  g.dim = dim;
  g.points_per_axis = points_per_axis > 0 ? points_per_axis : (dim == 3 ? 97 : 257);
  g.half_width = half_width > 0.0 ? half_width : (dim == 3 ? 6.0 : 8.0);
  return g;
}

ManifoldDescriptor RunConfig::target() const {
  ManifoldDescriptor t;
  t.kind = ManifoldKind::UnitSphere;
  t.ambient_dim = dim + 1;
  t.tube_radius = tube_radius;
  t.cutoff_inner = cutoff_inner > 0.0 ? cutoff_inner : 0.5 * tube_radius;
  t.cutoff_outer = cutoff_outer > 0.0 ? cutoff_outer : tube_radius;
  t.a_bound = 1.0;
  return t;
}

SphericalData RunConfig::data() const {
  if (data_kind == DataKind::Corotational) return SphericalData::corotational(dim, alpha, target());
  require(!table_path.empty(), ErrorCode::ConfigError, "data.table is required for tabulated data");
  std::ifstream in(table_path);
  require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot open data table " + table_path);
  SphericalData::Table table;
  table.n_theta = table_n_theta;
  table.n_phi = table_n_phi;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    for (double v : parse_list(line, "data", "table")) table.values.push_back(v);
  }
  return SphericalData::tabulated(dim, target(), std::move(table));
}

void RunConfig::validate() const {
  try {
    require(threads >= 0, ErrorCode::ConfigError, "run.threads must be >= 0");
    require(!out_dir.empty(), ErrorCode::ConfigError, "run.out must not be empty");
    const GridSpec g = grid();
    g.validate();
    require(g.points_per_axis >= 5, ErrorCode::ConfigError, "grid.m must be at least 5");
    const ManifoldDescriptor t = target();
    t.validate();
    if (data_kind == DataKind::Tabulated) {
      require(table_n_theta >= 4, ErrorCode::ConfigError, "data.n_theta must be at least 4");
      (void)data();
    } else {
      require(std::isfinite(alpha), ErrorCode::ConfigError, "data.alpha must be finite");
    }
    iteration.validate(t);
    require(shoot.tol_shoot > 0.0 && shoot.tol_shoot <= 1e-8, ErrorCode::ConfigError,
            "oracle.tol_shoot must lie in (0, 1e-8]");
    require(shoot.max_slope > 0.0, ErrorCode::ConfigError, "oracle.max_slope must be positive");
    require(shoot.profile.rho0 > 0.0 && shoot.profile.rho_max > 10.0 &&
                shoot.profile.output_step > 0.0 && shoot.profile.rho0 < shoot.profile.output_step,
            ErrorCode::ConfigError, "oracle integration range out of range");
    const auto& th = verify.thresholds;
    require(th.pde_residual > 0.0 && th.lei_relative_slack >= 0.0 && th.decay_margin >= 0.0 &&
                th.semigroup_weak_ratio > 0.0 && th.semigroup_spread >= 1.0,
            ErrorCode::ConfigError, "verify thresholds out of range");
    for (const auto& [l, v] : th.defect)
      require(v > 0.0, ErrorCode::ConfigError, "verify defect thresholds must be positive");
    require(verify.holder.pairs >= 1 && verify.holder.gamma >= 0.0 && verify.holder.gamma <= 1.0,
            ErrorCode::ConfigError, "verify Holder settings out of range");
    require(probe_pairs >= 3, ErrorCode::ConfigError, "sweep.probe_pairs must be at least 3");
    for (double a : sweep_alphas)
      require(a > 0.0, ErrorCode::ConfigError, "sweep.alphas must be positive");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(ErrorCode::ConfigError, e.what());
  }
}

void set_value(RunConfig& config, const std::string& section, const std::string& key,
               const std::string& value) {
  for (const auto& e : registry()) {
    if (section == e.section && key == e.key) {
      e.set(config, value);
      return;
    }
  }
  fail(ErrorCode::ConfigError, "unknown config key " + section + "." + key);
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  require(eq != std::string::npos && dot != std::string::npos && dot < eq, ErrorCode::ConfigError,
          "override must look like section.key=value: " + assignment);
  set_value(config, assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1),
            assignment.substr(eq + 1));
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig config;
  if (!path.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      fail(ErrorCode::ConfigError, e.what());
    }
    for (const auto& [section, body] : tree) {
      require(!body.empty() || body.data().empty(), ErrorCode::ConfigError,
              "top-level key outside a section: " + section);
      for (const auto& [key, value] : body) set_value(config, section, key, value.data());
    }
  }
  for (const auto& o : overrides) apply_override(config, o);
  return config;
}

void write_config(const RunConfig& config, std::ostream& out) {
  std::string current;
  for (const auto& e : registry()) {
    if (current != e.section) {
      if (!current.empty()) out << '\n';
      current = e.section;
      out << '[' << current << "]\n";
    }
    out << e.key << " = " << e.get(config) << '\n';
  }
}

std::string config_text(const RunConfig& config) {
  std::ostringstream os;
  write_config(config, os);
  return os.str();
}

}  // namespace ssflow::cli
