#pragma once

// Experiment configuration: a flat key = value file with one section naming
// the command,
//
//     schema_version = 1
//     [moments]
//     lip = 2
//     master_seed = 42
//
// validated against a per-command key table. Validation reports every
// problem at once, each tagged with its line; defaults are filled in and the
// normalized form is what manifests record and hash.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shelab/errors.hpp"
#include "shelab/io.hpp"

namespace shelab::config {

inline constexpr int kSchemaVersion = 1;

enum class ValueType { real, integer, boolean, text, real_list, int_list };

struct KeySpec {
  std::string name;
  ValueType type;
  /// nullopt: required. Empty string: optional without a default.
  std::optional<std::string> default_value;
  std::string help;
};

struct CommandSpec {
  std::string name;
  bool stochastic = false;
  std::string summary;
  std::vector<KeySpec> keys;

  const KeySpec* key(const std::string& k) const {
    for (const auto& s : keys)
      if (s.name == k) return &s;
    return nullptr;
  }
};

namespace detail {

inline std::vector<KeySpec> model_keys() {
  return {
      {"alpha", ValueType::real, "2", "stability index of the generator, in (1, 2]"},
      {"lip", ValueType::real, "1", "slope of sigma(u) = lip * u + intercept"},
      {"intercept", ValueType::real, "0", "sigma(0)"},
      {"l_sigma", ValueType::real, "0", "lower slope with |sigma(u)| >= l_sigma |u| (bounds only)"},
      {"noise_mode", ValueType::text, "white", "none | white | capped_martingale | harmonic_mixture | frozen_hitting"},
      {"lambda0", ValueType::real, "0", "capped_martingale parameter"},
      {"C", ValueType::real, "1", "mixture constant for harmonic_mixture and frozen_hitting"},
      {"a", ValueType::real, "0", "frozen_hitting level"},
      {"u0", ValueType::real, "1", "constant initial condition"},
      {"per_site_brownian", ValueType::boolean, "false", "independent Brownian path per grid site"},
      {"half_width", ValueType::real, "3.2", "grid covers [-half_width, half_width)"},
      {"n_points", ValueType::integer, "128", "grid points (power of 2)"},
      {"dt", ValueType::real, "0.001", "time step"},
      {"horizon", ValueType::real, "1", "final time"},
      {"output_stride", ValueType::integer, "10", "keep every k-th time step"},
      {"master_seed", ValueType::integer, std::nullopt, "root seed"},
  };
}

inline KeySpec output_dir_key() {
  return {"output_dir", ValueType::text, "", "output directory (default: $SHELAB_OUTPUT_DIR or ./shelab_out)"};
}

inline std::vector<CommandSpec> build_commands() {
  std::vector<CommandSpec> cmds;
  cmds.push_back({"upsilon",
                  false,
                  "Upsilon(beta) and optionally its inverse",
                  {{"alpha", ValueType::real, "2", "stability index in (1, 2]"},
                   {"beta", ValueType::real_list, std::nullopt, "beta values"},
                   {"inverse", ValueType::real_list, "", "values t for Upsilon^{-1}(t)"}}});
  cmds.push_back({"kernel",
                  false,
                  "stable kernel against its two-sided envelope",
                  {{"alpha", ValueType::real, "1.5", "stability index in (1, 2]"},
                   {"t_list", ValueType::real_list, "0.1,0.5,1,2", "times"},
                   {"x_list", ValueType::real_list, "0,0.1,0.5,1,2,5,10", "positions"}}});
  cmds.push_back({"martingale",
                  true,
                  "Hermite expansion and Monte Carlo mean of M_t^lambda",
                  {{"lambda", ValueType::real, "1", "martingale parameter"},
                   {"b", ValueType::real, "0.5", "value of B_t for the series"},
                   {"t", ValueType::real, "1", "time"},
                   {"n_terms", ValueType::integer, "30", "series terms"},
                   {"paths", ValueType::integer, "100000", "Monte Carlo paths"},
                   {"master_seed", ValueType::integer, std::nullopt, "root seed"}}});
  cmds.push_back({"hitting",
                  true,
                  "Laplace transform of the first hitting time",
                  {{"a", ValueType::real, "1", "level"},
                   {"lambda", ValueType::real, "0.5", "Laplace variable"},
                   {"paths", ValueType::integer, "200000", "Monte Carlo paths"},
                   {"dt", ValueType::real, "0.0001", "time step"},
                   {"horizon", ValueType::real, "", "simulation horizon (default 12 / lambda)"},
                   {"bridge", ValueType::boolean, "true", "Brownian-bridge crossing correction"},
                   {"master_seed", ValueType::integer, std::nullopt, "root seed"}}});
  {
    CommandSpec sim{"simulate", true, "one replica of the SPDE on the grid", detail::model_keys()};
    sim.keys.push_back({"replica", ValueType::integer, "0", "replica index"});
    cmds.push_back(sim);
  }
  {
    CommandSpec mom{"moments", true, "moment series at the grid center and Lyapunov fits", detail::model_keys()};
    mom.keys.push_back({"p_list", ValueType::int_list, "2", "even moment orders"});
    mom.keys.push_back({"n_replicas", ValueType::integer, "1000", "replicas (>= 100)"});
    cmds.push_back(mom);
    CommandSpec bnd = mom;
    bnd.name = "bounds";
    bnd.summary = "fitted exponents against the growth bounds";
    bnd.keys.push_back({"z_p", ValueType::real, "", "moment constant (default 2 sqrt(p))"});
    bnd.keys.push_back({"t0", ValueType::real, "", "horizon in exp(lambda0^2 t0 (p-1)) (default: horizon)"});
    bnd.keys.push_back({"kernel_constant", ValueType::real, "1", "constant in the stable growth rate"});
    cmds.push_back(bnd);
  }
  cmds.push_back({"renewal",
                  false,
                  "extremal solution of the renewal inequality and its exponential bound",
                  {{"c1", ValueType::real, "1", "constant term"},
                   {"kappa", ValueType::real, "1", "kernel weight"},
                   {"rho", ValueType::real, "0.5", "kernel exponent"},
                   {"t_max", ValueType::real, "10", "end of the time grid"},
                   {"n_t", ValueType::integer, "101", "time grid points"}}});
  for (auto& c : cmds) c.keys.push_back(output_dir_key());
  return cmds;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_real(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

inline std::optional<long long> parse_integer(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

inline std::optional<bool> parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace detail

inline const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> cmds = detail::build_commands();
  return cmds;
}

inline const CommandSpec* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return &c;
  return nullptr;
}

struct Diagnostic {
  /// 0 when not tied to a line of the file.
  int line = 0;
  std::string message;

  std::string str() const { return line > 0 ? "line " + std::to_string(line) + ": " + message : message; }
};

class ValidationError : public ConfigError {
 public:
  explicit ValidationError(std::vector<Diagnostic> diags)
      : ConfigError(join(diags)), diagnostics_(std::move(diags)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<Diagnostic>& d) {
    std::string s;
    for (const auto& x : d) s += (s.empty() ? "" : "\n") + x.str();
    return s;
  }
  std::vector<Diagnostic> diagnostics_;
};

struct RawEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct RawConfig {
  int schema_version = kSchemaVersion;
  std::string command;
  int command_line = 0;
  std::vector<RawEntry> entries;
};

/// Splits config text into schema_version, the command section and its entries.
/// Syntax errors (all of them) are thrown as a ValidationError.
inline RawConfig parse_text(const std::string& text) {
  RawConfig raw;
  std::vector<Diagnostic> errs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool in_section = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back({lineno, "unterminated section header"});
        continue;
      }
      if (in_section) {
        errs.push_back({lineno, "only one command section is allowed per file"});
        continue;
      }
      raw.command = detail::trim(line.substr(1, line.size() - 2));
      raw.command_line = lineno;
      in_section = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back({lineno, "expected 'key = value' (column 1: '" + line + "')"});
      continue;
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) {
      errs.push_back({lineno, "empty key"});
      continue;
    }
    if (!in_section) {
      if (key == "schema_version") {
        const auto v = detail::parse_integer(value);
        if (!v)
          errs.push_back({lineno, "schema_version must be an integer"});
        else
          raw.schema_version = static_cast<int>(*v);
      } else {
        errs.push_back({lineno, "key '" + key + "' appears before the command section"});
      }
      continue;
    }
    raw.entries.push_back({key, value, lineno});
  }
  if (!in_section) errs.push_back({0, "no command section ([upsilon], [moments], ...) found"});
  if (!errs.empty()) throw ValidationError(std::move(errs));
  return raw;
}

/// A validated, normalized experiment: every key of the command is present
/// (defaults filled in) and values are in canonical text form.
struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string command;
  std::map<std::string, std::string> values;
  std::set<std::string> defaulted;

  bool has(const std::string& k) const {
    const auto it = values.find(k);
    return it != values.end() && !it->second.empty();
  }
  const std::string& text(const std::string& k) const {
    const auto it = values.find(k);
    if (it == values.end()) throw ConfigError("unknown key '" + k + "' for command " + command);
    return it->second;
  }
  double real(const std::string& k) const { return *detail::parse_real(text(k)); }
  long long integer(const std::string& k) const { return *detail::parse_integer(text(k)); }
  bool flag(const std::string& k) const { return *detail::parse_bool(text(k)); }
  std::optional<double> optional_real(const std::string& k) const {
    if (!has(k)) return std::nullopt;
    return real(k);
  }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> v;
    if (!has(k)) return v;
    for (const auto& s : detail::split_list(text(k))) v.push_back(*detail::parse_real(s));
    return v;
  }
  std::vector<int> ints(const std::string& k) const {
    std::vector<int> v;
    if (!has(k)) return v;
    for (const auto& s : detail::split_list(text(k))) v.push_back(static_cast<int>(*detail::parse_integer(s)));
    return v;
  }
  std::uint64_t master_seed() const { return static_cast<std::uint64_t>(integer("master_seed")); }

  /// Normalized config text; output_dir is left out because it does not affect results.
  std::string canonical_text() const {
    std::string s = "schema_version = " + std::to_string(schema_version) + "\n[" + command + "]\n";
    for (const auto& [k, v] : values)
      if (k != "output_dir") s += k + " = " + v + "\n";
    return s;
  }
  std::string hash() const { return io::hex64(io::fnv1a(canonical_text())); }

  nlohmann::json to_json() const {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : values) params[k] = v;
    return {{"schema_version", schema_version},
            {"command", command},
            {"parameters", params},
            {"defaulted", std::vector<std::string>(defaulted.begin(), defaulted.end())}};
  }
};

namespace detail {

inline std::optional<std::string> normalize(const KeySpec& spec, const std::string& value, std::string& error) {
  auto bad = [&](const std::string& what) -> std::optional<std::string> {
    error = "key '" + spec.name + "': " + what + " (got '" + value + "')";
    return std::nullopt;
  };
  switch (spec.type) {
    case ValueType::real: {
      const auto v = parse_real(value);
      if (!v) return bad("expected a real number");
      return io::format_number(*v);
    }
    case ValueType::integer: {
      const auto v = parse_integer(value);
      if (!v) return bad("expected an integer");
      return std::to_string(*v);
    }
    case ValueType::boolean: {
      const auto v = parse_bool(value);
      if (!v) return bad("expected true or false");
      return *v ? "true" : "false";
    }
    case ValueType::text:
      return value;
    case ValueType::real_list: {
      std::string out;
      for (const auto& item : split_list(value)) {
        const auto v = parse_real(item);
        if (!v) return bad("expected a comma-separated list of real numbers");
        out += (out.empty() ? "" : ",") + io::format_number(*v);
      }
      if (out.empty()) return bad("empty list");
      return out;
    }
    case ValueType::int_list: {
      std::string out;
      for (const auto& item : split_list(value)) {
        const auto v = parse_integer(item);
        if (!v) return bad("expected a comma-separated list of integers");
        out += (out.empty() ? "" : ",") + std::to_string(*v);
      }
      if (out.empty()) return bad("empty list");
      return out;
    }
  }
  return value;
}

inline bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

/// Range and consistency checks on a type-checked config. `line_of` maps keys to lines.
inline void check_domain(const ExperimentConfig& c, const std::map<std::string, int>& line_of,
                         std::vector<Diagnostic>& errs) {
  auto line = [&](const std::string& k) {
    const auto it = line_of.find(k);
    return it == line_of.end() ? 0 : it->second;
  };
  auto fail = [&](const std::string& k, const std::string& msg) { errs.push_back({line(k), msg}); };
  auto ok = [&](const std::string& k) { return c.values.count(k) && detail::parse_real(c.values.at(k)).has_value(); };
  auto ok_int = [&](const std::string& k) {
    return c.values.count(k) && detail::parse_integer(c.values.at(k)).has_value();
  };

  if (ok("alpha")) {
    const double a = c.real("alpha");
    if (!(a > 1.0 && a <= 2.0))
      fail("alpha", "alpha = " + c.text("alpha") + " is outside (1, 2]: Upsilon is finite and the growth bounds hold "
                    "only for alpha in (1, 2]");
  }
  for (const char* k : {"dt", "horizon", "half_width", "t", "t_max", "c1"})
    if (c.has(k) && ok(k) && !(c.real(k) > 0.0)) fail(k, std::string(k) + " must be > 0");
  for (const char* k : {"lip", "l_sigma", "kappa", "kernel_constant"})
    if (c.has(k) && ok(k) && !(c.real(k) >= 0.0)) fail(k, std::string(k) + " must be >= 0");
  if (c.has("rho") && ok("rho") && !(c.real("rho") > 0.0)) fail("rho", "rho must be > 0");
  if (c.has("z_p") && ok("z_p") && !(c.real("z_p") > 0.0)) fail("z_p", "z_p must be > 0");
  if (c.has("t0") && ok("t0") && !(c.real("t0") >= 0.0)) fail("t0", "t0 must be >= 0");
  if (c.has("C") && ok("C") && !(c.real("C") > 0.0)) fail("C", "C must be > 0");
  if (c.has("n_points") && ok_int("n_points") &&
      (!is_power_of_two(c.integer("n_points")) || c.integer("n_points") < 8))
    fail("n_points", "n_points must be a power of 2 and >= 8");
  for (const char* k : {"output_stride", "n_terms", "paths", "n_t"})
    if (c.has(k) && ok_int(k) && c.integer(k) < 1) fail(k, std::string(k) + " must be >= 1");
  if (c.has("n_t") && ok_int("n_t") && c.integer("n_t") < 2) fail("n_t", "n_t must be >= 2");
  if (c.has("replica") && ok_int("replica") && c.integer("replica") < 0) fail("replica", "replica must be >= 0");
  if (c.has("n_replicas") && ok_int("n_replicas") && c.integer("n_replicas") < 100)
    fail("n_replicas", "n_replicas must be >= 100");
  if (c.has("master_seed") && ok_int("master_seed") && c.integer("master_seed") < 0)
    fail("master_seed", "master_seed must be >= 0");
  if (c.has("p_list")) {
    bool parsed = true;
    for (const auto& s : split_list(c.text("p_list"))) parsed = parsed && parse_integer(s).has_value();
    if (parsed)
      for (int p : c.ints("p_list"))
        if (p < 2 || p % 2 != 0) fail("p_list", "p_list entries must be even integers >= 2, got " + std::to_string(p));
  }
  if (c.has("beta")) {
    bool parsed = true;
    for (const auto& s : split_list(c.text("beta"))) parsed = parsed && parse_real(s).has_value();
    if (parsed)
      for (double b : c.reals("beta"))
        if (!(b > 0.0)) fail("beta", "beta values must be > 0");
  }
  if (c.has("inverse")) {
    bool parsed = true;
    for (const auto& s : split_list(c.text("inverse"))) parsed = parsed && parse_real(s).has_value();
    if (parsed)
      for (double t : c.reals("inverse"))
        if (!(t > 0.0)) fail("inverse", "inverse arguments must be > 0");
  }
  if (c.has("noise_mode")) {
    static const std::set<std::string> modes{"none", "white", "capped_martingale", "harmonic_mixture",
                                             "frozen_hitting"};
    if (!modes.count(c.text("noise_mode")))
      fail("noise_mode", "noise_mode must be one of none, white, capped_martingale, harmonic_mixture, "
                         "frozen_hitting (got '" + c.text("noise_mode") + "')");
  }
  if (c.has("l_sigma") && ok("l_sigma") && ok("lip") && ok("intercept") && c.real("l_sigma") > 0.0 &&
      (c.real("l_sigma") > c.real("lip") || c.real("intercept") != 0.0))
    fail("l_sigma", "l_sigma > 0 requires l_sigma <= lip and intercept = 0");
  if (c.command != "hitting" && ok("dt") && ok("horizon") && c.real("dt") > c.real("horizon"))
    fail("dt", "dt exceeds horizon");
  if (c.command == "hitting" && ok("lambda")) {
    const double lam = c.real("lambda");
    if (!(lam > 0.0)) {
      fail("lambda", "lambda must be > 0");
    } else if (c.has("horizon") && ok("horizon") && std::exp(-lam * c.real("horizon")) >= 1e-4) {
      fail("horizon", "horizon too short: exp(-lambda * horizon) must be < 1e-4");
    }
  }
}

}  // namespace detail

/// Validates entries for `command`; every error is collected. When
/// `require_seed` is false a missing master_seed defaults to 1.
inline ExperimentConfig validate(const std::string& command, const std::vector<RawEntry>& entries,
                                 int schema_version = kSchemaVersion, bool require_seed = true,
                                 int command_line = 0) {
  std::vector<Diagnostic> errs;
  const CommandSpec* spec = find_command(command);
  if (!spec) {
    std::string names;
    for (const auto& c : commands()) names += (names.empty() ? "" : ", ") + c.name;
    throw ValidationError({{command_line, "unknown command '" + command + "' (expected one of " + names + ")"}});
  }
  if (schema_version != kSchemaVersion)
    errs.push_back({0, "unsupported schema_version " + std::to_string(schema_version) + " (expected " +
                           std::to_string(kSchemaVersion) + ")"});
  ExperimentConfig cfg;
  cfg.schema_version = schema_version;
  cfg.command = command;
  std::map<std::string, int> line_of;
  for (const auto& e : entries) {
    const KeySpec* ks = spec->key(e.key);
    if (!ks) {
      errs.push_back({e.line, "unknown key '" + e.key + "' for command " + command});
      continue;
    }
    if (line_of.count(e.key)) {
      errs.push_back({e.line, "duplicate key '" + e.key + "' (first set on line " +
                                  std::to_string(line_of[e.key]) + ")"});
      continue;
    }
    line_of[e.key] = e.line;
    std::string err;
    if (auto v = detail::normalize(*ks, e.value, err))
      cfg.values[e.key] = *v;
    else
      errs.push_back({e.line, err});
  }
  for (const auto& ks : spec->keys) {
    if (line_of.count(ks.name)) continue;
    if (ks.default_value) {
      std::string err;
      cfg.values[ks.name] = ks.default_value->empty() ? "" : *detail::normalize(ks, *ks.default_value, err);
      if (!ks.default_value->empty()) cfg.defaulted.insert(ks.name);
    } else if (ks.name == "master_seed" && !require_seed) {
      cfg.values[ks.name] = "1";
      cfg.defaulted.insert(ks.name);
    } else {
      errs.push_back({command_line, "missing required key '" + ks.name + "' for command " + command});
    }
  }
  detail::check_domain(cfg, line_of, errs);
  if (!errs.empty()) {
    std::stable_sort(errs.begin(), errs.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return (a.line == 0 ? 1 << 30 : a.line) < (b.line == 0 ? 1 << 30 : b.line);
    });
    throw ValidationError(std::move(errs));
  }
  return cfg;
}

inline ExperimentConfig validate_text(const std::string& text) {
  const auto raw = parse_text(text);
  return validate(raw.command, raw.entries, raw.schema_version, true, raw.command_line);
}

/// Rebuilds a config from its manifest form and re-validates it.
inline ExperimentConfig from_json(const nlohmann::json& j) {
  std::vector<RawEntry> entries;
  for (const auto& [k, v] : j.at("parameters").items()) {
    const auto s = v.get<std::string>();
    if (!s.empty()) entries.push_back({k, s, 0});
  }
  auto cfg = validate(j.at("command").get<std::string>(), entries, j.at("schema_version").get<int>());
  if (j.contains("defaulted"))
    cfg.defaulted = j.at("defaulted").get<std::set<std::string>>();
  return cfg;
}

}  // namespace shelab::config
