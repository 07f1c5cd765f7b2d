#pragma once

// Executes a validated ExperimentConfig: dispatches to the numerical modules,
// writes one CSV per data product plus manifest.json, and maps the outcome
// to an exit status.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shelab/brownian.hpp"
#include "shelab/config.hpp"
#include "shelab/io.hpp"
#include "shelab/kernels.hpp"
#include "shelab/levy.hpp"
#include "shelab/martingale.hpp"
#include "shelab/moments.hpp"
#include "shelab/spde.hpp"

#ifndef SHELAB_VERSION
#define SHELAB_VERSION "0.0.0"
#endif

namespace shelab::runner {

enum ExitCode : int { ok = 0, validation_failed = 2, runtime_failed = 3, blowup_dominated = 4 };

struct RunOptions {
  unsigned workers = 1;
  /// Overrides the config's output_dir and SHELAB_OUTPUT_DIR when non-empty.
  std::filesystem::path output_dir;
  std::string invocation;
};

struct RunResult {
  int exit_code = ExitCode::ok;
  std::filesystem::path output_dir;
  std::vector<io::ArtifactRecord> files;
  nlohmann::json manifest;
  /// Human-readable result lines.
  std::vector<std::string> summary;
  std::vector<std::string> warnings;
};

inline std::filesystem::path resolve_output_dir(const config::ExperimentConfig& cfg, const RunOptions& opt) {
  if (!opt.output_dir.empty()) return opt.output_dir;
  if (cfg.has("output_dir")) return cfg.text("output_dir");
  if (const char* env = std::getenv("SHELAB_OUTPUT_DIR"); env && *env) return env;
  return "shelab_out";
}

inline ModelSpec model_from(const config::ExperimentConfig& c) {
  ModelSpec m;
  m.alpha = c.real("alpha");
  m.sigma = {c.real("lip"), c.real("intercept")};
  m.l_sigma = c.real("l_sigma");
  m.u0_constant = c.real("u0");
  m.per_site_brownian = c.flag("per_site_brownian");
  const auto& mode = c.text("noise_mode");
  if (mode == "none")
    m.noise = noise::None{};
  else if (mode == "white")
    m.noise = noise::White{};
  else if (mode == "capped_martingale")
    m.noise = noise::CappedMartingale{c.real("lambda0")};
  else if (mode == "harmonic_mixture")
    m.noise = noise::HarmonicMixture{c.real("C")};
  else if (mode == "frozen_hitting")
    m.noise = noise::FrozenHitting{c.real("a"), c.real("C")};
  else
    throw ConfigError("unknown noise_mode '" + mode + "'");
  return m;
}

inline Discretization discretization_from(const config::ExperimentConfig& c) {
  Discretization d;
  d.grid = {c.real("half_width"), static_cast<std::size_t>(c.integer("n_points"))};
  d.dt = c.real("dt");
  d.horizon = c.real("horizon");
  d.output_stride = static_cast<std::size_t>(c.integer("output_stride"));
  return d;
}

/// Bound inputs for p from a bounds/moments config.
inline BoundParams bound_params_from(const config::ExperimentConfig& c, int p) {
  BoundParams bp;
  bp.p = p;
  bp.lip_sigma = c.real("lip");
  bp.l_sigma = c.real("l_sigma");
  const auto& mode = c.text("noise_mode");
  bp.C = (mode == "harmonic_mixture" || mode == "frozen_hitting") ? c.real("C") : 1.0;
  bp.lambda0 = mode == "capped_martingale" ? c.real("lambda0") : 0.0;
  bp.a = mode == "frozen_hitting" ? c.real("a") : 0.0;
  if (c.values.count("z_p")) bp.z_p = c.optional_real("z_p");
  bp.t0 = c.values.count("t0") && c.has("t0") ? c.real("t0") : c.real("horizon");
  if (c.values.count("kernel_constant")) bp.kernel_constant = c.real("kernel_constant");
  return bp;
}

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(10);
  ss << v;
  return ss.str();
}

inline void run_upsilon(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r) {
  const auto exp = LevyExponent::alpha_stable(c.real("alpha"));
  io::CsvBuilder csv({"beta", "upsilon"});
  for (double beta : c.reals("beta")) {
    const double v = upsilon(exp, beta);
    csv.row({beta, v});
    r.summary.push_back("upsilon(" + fmt(beta) + ") = " + fmt(v));
  }
  w.write("upsilon.csv", csv.str());
  const auto inv = c.reals("inverse");
  if (!inv.empty()) {
    io::CsvBuilder icsv({"t", "upsilon_inverse"});
    for (double t : inv) {
      const double v = upsilon_inverse(exp, t);
      icsv.row({t, v});
      r.summary.push_back("upsilon_inverse(" + fmt(t) + ") = " + fmt(v));
    }
    w.write("upsilon_inverse.csv", icsv.str());
  }
}

inline void run_kernel(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r) {
  const double alpha = c.real("alpha");
  const auto rep = kernel_bound_check(alpha, c.reals("t_list"), c.reals("x_list"));
  io::CsvBuilder csv({"t", "x", "density", "envelope", "ratio"});
  for (const auto& e : rep.ratios)
    csv.row({e.t, e.x, e.ratio * stable_envelope(alpha, e.t, e.x), stable_envelope(alpha, e.t, e.x), e.ratio});
  w.write("kernel.csv", csv.str());
  r.summary.push_back("ratio range [" + fmt(rep.min_ratio) + ", " + fmt(rep.max_ratio) + "], c = " + fmt(rep.c));
}

inline void run_martingale(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r, unsigned workers) {
  const double lambda = c.real("lambda"), b = c.real("b"), t = c.real("t");
  const int n_terms = static_cast<int>(c.integer("n_terms"));
  io::CsvBuilder terms({"n", "space_time_hermite", "partial_sum"});
  double coef = 1.0, sum = 0.0;
  for (int n = 0; n < n_terms; ++n) {
    if (n > 0) coef *= lambda / n;
    const double h = space_time_hermite(n, b, t);
    sum += coef * h;
    terms.row({static_cast<double>(n), h, sum});
  }
  w.write("series.csv", terms.str());
  const double exact = exp_martingale(lambda, b, t);
  const auto mc = martingale_mean_check(lambda, t, static_cast<std::size_t>(c.integer("paths")), c.master_seed(),
                                        workers);
  io::CsvBuilder summary({"quantity", "value"});
  summary.row_text({"series", io::format_number(sum)});
  summary.row_text({"exact", io::format_number(exact)});
  summary.row_text({"mc_mean", io::format_number(mc.mean)});
  summary.row_text({"mc_std_error", io::format_number(mc.std_error)});
  w.write("martingale.csv", summary.str());
  r.summary.push_back("series(" + std::to_string(n_terms) + " terms) = " + fmt(sum) + ", exact = " + fmt(exact));
  r.summary.push_back("E[M_t] = " + fmt(mc.mean) + " +/- " + fmt(mc.std_error) + " (expected 1)");
}

inline void run_hitting(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r, unsigned workers) {
  const double lambda = c.real("lambda");
  const double horizon = c.has("horizon") ? c.real("horizon") : 12.0 / lambda;
  const auto rep = hitting_laplace_check(c.real("a"), lambda, static_cast<std::size_t>(c.integer("paths")),
                                         c.real("dt"), horizon, c.master_seed(), workers, c.flag("bridge"));
  io::CsvBuilder csv({"a", "lambda", "empirical", "std_error", "exact", "lower_bracket", "fraction_hit", "n_paths"});
  csv.row({rep.a, rep.lambda, rep.empirical, rep.std_error, rep.exact, rep.lower_bracket, rep.fraction_hit,
           static_cast<double>(rep.n_paths)});
  w.write("hitting.csv", csv.str());
  r.summary.push_back("E[exp(-lambda T_a)] = " + fmt(rep.empirical) + " +/- " + fmt(3.0 * rep.std_error) +
                      " (3 s.e.), exact " + fmt(rep.exact) + (rep.within_tolerance() ? " [within]" : " [outside]"));
}

inline void run_simulate(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r) {
  const auto model = model_from(c);
  const auto disc = discretization_from(c);
  const auto seed = derive_seed(c.master_seed(), static_cast<std::uint64_t>(c.integer("replica")));
  const auto field = simulate(model, disc, seed);
  w.write("field.csv", io::field_csv(field));
  if (field.blowup_index) {
    r.warnings.push_back("replica blew up after output row " + std::to_string(*field.blowup_index));
    r.exit_code = ExitCode::blowup_dominated;
  }
  r.summary.push_back("wrote " + std::to_string(field.n_times()) + " time rows of " +
                      std::to_string(field.grid.n_points) + " points");
}

struct MomentRun {
  std::vector<MomentSeries> series;
  std::vector<FitDiagnostic> fits;
};

inline MomentRun run_moments_core(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r,
                                  unsigned workers) {
  const auto model = model_from(c);
  const auto disc = discretization_from(c);
  MomentRun out;
  const auto n_rep = static_cast<std::size_t>(c.integer("n_replicas"));
  out.series = estimate_moments(model, disc, c.ints("p_list"), n_rep, c.master_seed(), workers);
  io::CsvBuilder fits({"p", "slope", "slope_std_error", "intercept", "t_min", "t_max", "r_squared",
                       "last_third_slope", "drift_warning"});
  for (const auto& s : out.series) {
    io::CsvBuilder csv({"t", "estimate", "stderr", "n_effective", "log_mean"});
    for (std::size_t k = 0; k < s.size(); ++k)
      csv.row({s.times[k], s.estimates[k], s.std_error[k], static_cast<double>(s.n_effective[k]), s.log_mean[k]});
    w.write("moments_p" + std::to_string(s.p) + ".csv", csv.str());
    for (const auto& warn : s.warnings) r.warnings.push_back("p = " + std::to_string(s.p) + ": " + warn);
    try {
      const auto d = fit_with_diagnostic(s);
      out.fits.push_back(d);
      fits.row({static_cast<double>(s.p), d.fit.slope, d.fit.slope_std_error, d.fit.intercept, d.fit.t_min,
                d.fit.t_max, d.fit.r_squared, d.last_third_slope.value_or(std::nan("")),
                d.drift_warning ? 1.0 : 0.0});
      if (d.drift_warning)
        r.warnings.push_back("p = " + std::to_string(s.p) + ": slope over the last third differs by " +
                             fmt(100.0 * d.relative_drift) + "% from the last-half fit");
      r.summary.push_back("gamma_hat(" + std::to_string(s.p) + ") = " + fmt(d.fit.slope) + " +/- " +
                          fmt(d.fit.slope_std_error) + " on [" + fmt(d.fit.t_min) + ", " + fmt(d.fit.t_max) + "]");
    } catch (const DomainError& e) {
      r.warnings.push_back("p = " + std::to_string(s.p) + ": no fit (" + e.what() + ")");
    }
    if (2 * s.flagged_blowups > s.n_replicas) r.exit_code = ExitCode::blowup_dominated;
  }
  w.write("fits.csv", fits.str());
  return out;
}

inline void run_bounds(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r, unsigned workers) {
  const auto mr = run_moments_core(c, w, r, workers);
  const auto exp = LevyExponent::alpha_stable(c.real("alpha"));
  auto reports = nlohmann::json::array();
  for (const auto& d : mr.fits) {
    const auto bp = bound_params_from(c, d.fit.p);
    const auto rep = compare_bounds(d.fit, exp, bp, c.text("noise_mode"));
    reports.push_back(to_json(rep));
    r.summary.push_back("p = " + std::to_string(rep.p) + ": gamma_hat = " + fmt(rep.gamma_hat) + " CI [" +
                        fmt(rep.ci_low) + ", " + fmt(rep.ci_high) + "], upper bound " + fmt(rep.upper_bound) +
                        " (z_p = 1: " + fmt(rep.upper_bound_zp_one) + ", z_p = 2 sqrt p: " +
                        fmt(rep.upper_bound_zp_default) + ")");
    if (rep.lower_bound)
      r.summary.push_back("p = 2 lower reference " + fmt(*rep.lower_bound) + " (" + rep.lower_label + ")" +
                          (rep.lower_violated ? " [fit below]" : ""));
    if (rep.upper_violated) r.warnings.push_back("p = " + std::to_string(rep.p) + ": fit exceeds the upper bound");
  }
  w.write("bounds.json", reports.dump(2) + "\n");
}

inline void run_renewal(const config::ExperimentConfig& c, io::ArtifactWriter& w, RunResult& r) {
  const double c1 = c.real("c1"), kappa = c.real("kappa"), rho = c.real("rho"), t_max = c.real("t_max");
  const auto n_t = static_cast<std::size_t>(c.integer("n_t"));
  std::vector<double> grid(n_t);
  for (std::size_t k = 0; k < n_t; ++k) grid[k] = t_max * static_cast<double>(k) / static_cast<double>(n_t - 1);
  const auto rep = renewal_bound_check(c1, kappa, rho, grid);
  io::CsvBuilder csv({"t", "solution", "bound"});
  for (std::size_t k = 0; k < n_t; ++k) csv.row({rep.times[k], rep.solution[k], rep.bound[k]});
  w.write("renewal.csv", csv.str());
  const double resid = renewal_residual(c1, kappa, rho, grid);
  r.summary.push_back("rate = " + fmt(rep.rate) + ", c2 = " + fmt(rep.c2) + " (c3 = 1), integral-equation residual " +
                      fmt(resid));
}

}  // namespace detail

/// Runs `cfg`, writing artifacts and manifest.json into the resolved output directory.
inline RunResult run(const config::ExperimentConfig& cfg, const RunOptions& opt) {
  const auto started = std::chrono::steady_clock::now();
  RunResult r;
  r.output_dir = resolve_output_dir(cfg, opt);
  io::ArtifactWriter w(r.output_dir);
  const unsigned workers = std::max(1u, opt.workers);
  const auto& cmd = cfg.command;
  if (cmd == "upsilon")
    detail::run_upsilon(cfg, w, r);
  else if (cmd == "kernel")
    detail::run_kernel(cfg, w, r);
  else if (cmd == "martingale")
    detail::run_martingale(cfg, w, r, workers);
  else if (cmd == "hitting")
    detail::run_hitting(cfg, w, r, workers);
  else if (cmd == "simulate")
    detail::run_simulate(cfg, w, r);
  else if (cmd == "moments")
    detail::run_moments_core(cfg, w, r, workers);
  else if (cmd == "bounds")
    detail::run_bounds(cfg, w, r, workers);
  else if (cmd == "renewal")
    detail::run_renewal(cfg, w, r);
  else
    throw ConfigError("unknown command '" + cmd + "'");
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  r.files = w.records();
  const auto* spec = config::find_command(cmd);
  r.manifest = {{"schema_version", io::kManifestSchemaVersion},
                {"command", cmd},
                {"invocation", opt.invocation},
                {"config", cfg.to_json()},
                {"config_hash", cfg.hash()},
                {"master_seed", spec && spec->stochastic ? nlohmann::json(cfg.master_seed()) : nlohmann::json(nullptr)},
                {"library_version", SHELAB_VERSION},
                {"workers", workers},
                {"wall_time_seconds", wall},
                {"exit_code", r.exit_code},
                {"files", io::records_json(r.files)},
                {"warnings", r.warnings}};
  io::write_atomic(r.output_dir / "manifest.json", r.manifest.dump(2) + "\n");
  return r;
}

/// Reads a manifest and returns the config it records.
inline config::ExperimentConfig config_from_manifest(const std::filesystem::path& path) {
  const auto j = nlohmann::json::parse(io::read_file(path));
  if (!j.contains("config")) throw ConfigError(path.string() + " is not a run manifest");
  return config::from_json(j.at("config"));
}

}  // namespace shelab::runner
