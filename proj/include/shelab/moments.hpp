#pragma once

// Monte Carlo moments E|u(x0, t)|^p, log-linear fits of their growth, the
// comparison of fitted exponents with the analytic growth bounds, and the
// extremal solution of the renewal inequality
//
//     f(t) <= c1 + kappa Int_0^t (t - s)^{rho - 1} f(s) ds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shelab/errors.hpp"
#include "shelab/levy.hpp"
#include "shelab/parallel.hpp"
#include "shelab/quadrature.hpp"
#include "shelab/rng.hpp"
#include "shelab/spde.hpp"
#include "shelab/stats.hpp"

namespace shelab {

struct MomentSeries {
  int p = 2;
  std::vector<double> times;
  std::vector<double> estimates;
  std::vector<double> std_error;
  /// Mean of ln|u|^p over replicas with u != 0 (geometric diagnostic; NaN if none).
  std::vector<double> log_mean;
  /// Replicas still finite at each time.
  std::vector<std::size_t> n_effective;
  std::size_t n_replicas = 0;
  std::size_t flagged_blowups = 0;
  /// True when every replica had blown up before the end of the horizon.
  bool truncated = false;
  std::vector<std::string> warnings;
  /// Replica groups for the delete-a-group jackknife of fitted slopes:
  /// group_sums[g][k] and group_counts[g][k] over replicas of group g.
  std::vector<std::vector<double>> group_sums;
  std::vector<std::vector<std::size_t>> group_counts;

  std::size_t size() const { return times.size(); }
};

/// |u(x0, t_k)| per replica and output time; NaN after a blow-up.
struct PointEnsemble {
  std::vector<double> times;
  std::size_t n_replicas = 0;
  /// n_replicas x times.size(), row-major by replica.
  std::vector<double> abs_values;
  std::vector<bool> blown_up;
};

/// Runs n_replicas replicas (replica i uses derive_seed(master_seed, i)) and
/// records |u| at the grid center.
inline PointEnsemble sample_center(const ModelSpec& model, const Discretization& disc, std::size_t n_replicas,
                                   std::uint64_t master_seed, unsigned workers = 1) {
  model.validate();
  disc.validate();
  PointEnsemble ens;
  const auto idx = disc.output_indices();
  for (auto k : idx) ens.times.push_back(disc.time(k));
  const std::size_t n_out = idx.size();
  const std::size_t x0 = disc.grid.center();
  ens.n_replicas = n_replicas;
  ens.abs_values.assign(n_replicas * n_out, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> blown(n_replicas, 0);
  parallel::for_each_index(n_replicas, workers, [&](std::size_t i) {
    double* row = ens.abs_values.data() + i * n_out;
    std::size_t slot = 0;
    const auto status = simulate_replica(model, disc, derive_seed(master_seed, i),
                                         [&](std::size_t, double, std::span<const double> u) {
                                           row[slot++] = std::abs(u[x0]);
                                         });
    blown[i] = status.blowup_step.has_value();
  });
  ens.blown_up.assign(blown.begin(), blown.end());
  return ens;
}

/// Per-time moment statistics of an ensemble; replicas are split into
/// `n_groups` contiguous groups for slope error estimation.
inline MomentSeries moment_series(const PointEnsemble& ens, int p, std::size_t n_groups = 20) {
  if (p < 2 || p % 2 != 0) throw DomainError("moment order p must be an even integer >= 2");
  MomentSeries s;
  s.p = p;
  s.n_replicas = ens.n_replicas;
  s.flagged_blowups = static_cast<std::size_t>(std::count(ens.blown_up.begin(), ens.blown_up.end(), true));
  n_groups = std::max<std::size_t>(1, std::min(n_groups, ens.n_replicas));
  s.group_sums.assign(n_groups, {});
  s.group_counts.assign(n_groups, {});
  const std::size_t n_out = ens.times.size();
  std::vector<double> vals, logs;
  for (std::size_t k = 0; k < n_out; ++k) {
    vals.clear();
    logs.clear();
    std::vector<double> gsum(n_groups, 0.0);
    std::vector<std::size_t> gcount(n_groups, 0);
    for (std::size_t i = 0; i < ens.n_replicas; ++i) {
      const double a = ens.abs_values[i * n_out + k];
      if (!std::isfinite(a)) continue;
      const double v = std::pow(a, p);
      vals.push_back(v);
      if (a > 0.0) logs.push_back(p * std::log(a));
      const std::size_t g = i * n_groups / ens.n_replicas;
      gsum[g] += v;
      ++gcount[g];
    }
    if (vals.empty()) {
      s.truncated = true;
      s.warnings.push_back("all replicas blown up before t = " + std::to_string(ens.times[k]) +
                           "; series truncated");
      break;
    }
    const auto est = stats::jackknife_mean(vals);
    s.times.push_back(ens.times[k]);
    s.estimates.push_back(est.mean);
    s.std_error.push_back(est.std_error);
    s.log_mean.push_back(logs.empty() ? std::numeric_limits<double>::quiet_NaN() : stats::mean(logs));
    s.n_effective.push_back(vals.size());
    for (std::size_t g = 0; g < n_groups; ++g) {
      s.group_sums[g].push_back(gsum[g]);
      s.group_counts[g].push_back(gcount[g]);
    }
  }
  if (s.flagged_blowups > 0)
    s.warnings.push_back(std::to_string(s.flagged_blowups) + " of " + std::to_string(s.n_replicas) +
                         " replicas blew up and were excluded from later times");
  return s;
}

/// E|u(x0, t)|^p for every p in p_list from one shared ensemble.
inline std::vector<MomentSeries> estimate_moments(const ModelSpec& model, const Discretization& disc,
                                                  const std::vector<int>& p_list, std::size_t n_replicas,
                                                  std::uint64_t master_seed, unsigned workers = 1) {
  if (p_list.empty()) throw DomainError("p_list is empty");
  for (int p : p_list)
    if (p < 2 || p % 2 != 0) throw DomainError("moment order p must be an even integer >= 2");
  if (n_replicas < 100) throw DomainError("estimate_moments needs n_replicas >= 100");
  const auto ens = sample_center(model, disc, n_replicas, master_seed, workers);
  std::vector<MomentSeries> out;
  for (int p : p_list) out.push_back(moment_series(ens, p));
  return out;
}

/// Exact E|u(x0, t)|^2 of the discrete scheme at the output times, for a
/// constant u0 and a deterministic noise factor (white, none, or
/// frozen_hitting at a = 0). The lag covariance c(j) = E[u(x_i) u(x_{i+j})]
/// follows c <- S_{2dt}[c + f^2 (dt/dx) E sigma(u)^2 delta_0] while the mean
/// stays at u0.
inline std::vector<double> second_moment_recursion(const ModelSpec& model, const Discretization& disc) {
  model.validate();
  disc.validate();
  if (!model.u0_values.empty()) throw ConfigError("second moment recursion needs a constant u0");
  double f = 0.0;
  if (std::holds_alternative<noise::White>(model.noise)) {
    f = 1.0;
  } else if (const auto* m = std::get_if<noise::FrozenHitting>(&model.noise); m && m->a == 0.0) {
    f = frozen_mixture_value(m->C, 0.0, 0.0);
  } else if (!model.noiseless()) {
    throw ConfigError("second moment recursion needs a deterministic noise factor, got " +
                      noise_mode_name(model.noise));
  }
  const std::size_t n = disc.grid.n_points;
  const double mean = model.u0_constant;
  const double gain = f * f * disc.dt / disc.grid.dx();
  SpectralTransform fft(disc.grid);
  const auto mult = heat_multiplier(disc.grid, model.alpha, 2.0 * disc.dt);
  std::vector<double> c(n, mean * mean);
  std::vector<double> out;
  const auto idx = disc.output_indices();
  std::size_t next = 0;
  const double lip = model.sigma.lip, b = model.sigma.intercept;
  for (std::size_t k = 0; next < idx.size(); ++k) {
    if (idx[next] == k) {
      out.push_back(c[0]);
      ++next;
    }
    if (k == disc.n_steps()) break;
    c[0] += gain * (lip * lip * c[0] + 2.0 * lip * b * mean + b * b);
    fft.apply_multiplier(c, mult);
  }
  return out;
}

struct LyapunovFit {
  int p = 2;
  double slope = 0.0;
  double intercept = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double r_squared = 0.0;
  /// Delete-a-group jackknife over replica groups when available, else the WLS error.
  double slope_std_error = 0.0;
  std::size_t n_points = 0;
};

namespace detail {

struct LineFit {
  double slope, intercept, r2, slope_se;
};

inline LineFit weighted_line(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& w) {
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  LineFit f{};
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += w[i] * r * r;
  }
  f.r2 = syy > 0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  f.slope_se = sxx > 0 ? std::sqrt(1.0 / sxx) : 0.0;
  return f;
}

}  // namespace detail

/// Default fit window: the last half of the series' time range.
inline std::pair<double, double> default_window(const MomentSeries& s) {
  if (s.times.empty()) throw DomainError("empty moment series");
  const double t_end = s.times.back();
  return {s.times.front() + 0.5 * (t_end - s.times.front()), t_end};
}

/// Weighted least-squares slope of ln(estimate) against t on [window.first, window.second].
/// Weights are estimate^2 / stderr^2 (delta method), with the relative variance floored at 1e-12.
inline LyapunovFit fit_lyapunov(const MomentSeries& s, std::pair<double, double> window) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < s.times.size(); ++k)
    if (s.times[k] >= window.first - 1e-12 && s.times[k] <= window.second + 1e-12) idx.push_back(k);
  if (idx.size() < 5) throw DomainError("fit window holds fewer than 5 points");
  std::vector<double> x, y, w;
  for (auto k : idx) {
    if (!(s.estimates[k] > 0.0))
      throw DomainError("non-positive moment estimate at t = " + std::to_string(s.times[k]));
    x.push_back(s.times[k]);
    y.push_back(std::log(s.estimates[k]));
    const double rel = s.std_error[k] / s.estimates[k];
    w.push_back(1.0 / std::max(rel * rel, 1e-12));
  }
  const auto f = detail::weighted_line(x, y, w);
  LyapunovFit fit;
  fit.p = s.p;
  fit.slope = f.slope;
  fit.intercept = f.intercept;
  fit.r_squared = f.r2;
  fit.t_min = x.front();
  fit.t_max = x.back();
  fit.n_points = x.size();
  fit.slope_std_error = f.slope_se;

  const std::size_t groups = s.group_sums.size();
  if (groups >= 2) {
    std::vector<double> slopes;
    for (std::size_t g = 0; g < groups; ++g) {
      std::vector<double> yg;
      for (auto k : idx) {
        double sum = 0;
        std::size_t count = 0;
        for (std::size_t h = 0; h < groups; ++h) {
          if (h == g) continue;
          sum += s.group_sums[h][k];
          count += s.group_counts[h][k];
        }
        if (count == 0 || !(sum > 0.0)) break;
        yg.push_back(std::log(sum / static_cast<double>(count)));
      }
      if (yg.size() != idx.size()) {
        slopes.clear();
        break;
      }
      slopes.push_back(detail::weighted_line(x, yg, w).slope);
    }
    if (!slopes.empty()) {
      const double m = stats::mean(slopes);
      double ss = 0;
      for (double v : slopes) ss += (v - m) * (v - m);
      fit.slope_std_error = std::sqrt((static_cast<double>(slopes.size()) - 1.0) / slopes.size() * ss);
    }
  }
  return fit;
}

inline LyapunovFit fit_lyapunov(const MomentSeries& s) { return fit_lyapunov(s, default_window(s)); }

/// Fit on the default window plus the drift guard: slope over the last third
/// compared with the slope over the last half.
struct FitDiagnostic {
  LyapunovFit fit;
  std::optional<double> last_third_slope;
  double relative_drift = 0.0;
  bool drift_warning = false;
};

inline FitDiagnostic fit_with_diagnostic(const MomentSeries& s) {
  FitDiagnostic d;
  d.fit = fit_lyapunov(s);
  const double t0 = s.times.front(), t1 = s.times.back();
  try {
    d.last_third_slope = fit_lyapunov(s, {t0 + (2.0 / 3.0) * (t1 - t0), t1}).slope;
  } catch (const DomainError&) {
    return d;
  }
  const double scale = std::max(std::abs(d.fit.slope), 1e-12);
  d.relative_drift = std::abs(*d.last_third_slope - d.fit.slope) / scale;
  d.drift_warning = d.relative_drift > 0.20;
  return d;
}

struct BoundReport {
  int p = 2;
  std::string noise_mode;
  /// How the lower reference relates to the simulated equation.
  std::string lower_label;
  double gamma_hat = 0.0;
  double gamma_std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  double r_squared = 0.0;
  double upper_bound = 0.0;
  double upper_bound_zp_one = 0.0;
  double upper_bound_zp_default = 0.0;
  std::optional<double> lower_bound;
  std::optional<double> stable_rate;
  bool upper_violated = false;
  bool lower_violated = false;
  BoundParams params;
  std::string exponent_kind;
  double alpha = 2.0;
};

inline std::string exponent_kind_name(ExponentKind k) {
  switch (k) {
    case ExponentKind::brownian:
      return "brownian";
    case ExponentKind::alpha_stable:
      return "alpha_stable";
    case ExponentKind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

/// Places a fitted exponent against the upper bound (at the given z_p and at
/// z_p in {1, 2 sqrt p}), the second-moment lower reference, and the stable
/// growth rate. Violations are flagged at 3 standard errors.
inline BoundReport compare_bounds(const LyapunovFit& fit, const LevyExponent& exp, const BoundParams& bp,
                                  const std::string& noise_mode = "white") {
  bp.validate();
  if (fit.p != bp.p)
    throw ConfigError("fit is for p = " + std::to_string(fit.p) + " but bounds are for p = " + std::to_string(bp.p));
  BoundReport r;
  r.p = bp.p;
  r.noise_mode = noise_mode;
  r.gamma_hat = fit.slope;
  r.gamma_std_error = fit.slope_std_error;
  r.ci_low = fit.slope - 1.96 * fit.slope_std_error;
  r.ci_high = fit.slope + 1.96 * fit.slope_std_error;
  r.t_min = fit.t_min;
  r.t_max = fit.t_max;
  r.r_squared = fit.r_squared;
  r.params = bp;
  r.exponent_kind = exponent_kind_name(exp.kind());
  r.alpha = exp.kind() == ExponentKind::tabulated ? std::numeric_limits<double>::quiet_NaN() : exp.alpha();

  r.upper_bound = upper_lyapunov_bound(exp, bp);
  BoundParams one = bp;
  one.z_p = 1.0;
  r.upper_bound_zp_one = upper_lyapunov_bound(exp, one);
  BoundParams dflt = bp;
  dflt.z_p.reset();
  r.upper_bound_zp_default = upper_lyapunov_bound(exp, dflt);
  r.upper_violated = fit.slope - 3.0 * fit.slope_std_error > r.upper_bound;

  if (noise_mode == "frozen_hitting")
    r.lower_label = "direct";
  else if (noise_mode == "harmonic_mixture")
    r.lower_label = "in-law, indicative";
  else
    r.lower_label = "reference";
  if (bp.p == 2 && lower_bound_k2(bp) > 0.0) {
    r.lower_bound = lower_lyapunov_bound(exp, bp);
    r.lower_violated = fit.slope + 3.0 * fit.slope_std_error < *r.lower_bound;
  }
  if (exp.kind() != ExponentKind::tabulated && exp.alpha() > 1.0) r.stable_rate = stable_growth_rate(exp.alpha(), bp);
  return r;
}

inline nlohmann::json to_json(const BoundParams& bp) {
  nlohmann::json j{{"p", bp.p},           {"lip_sigma", bp.lip_sigma},
                   {"l_sigma", bp.l_sigma}, {"z_p", bp.effective_z_p()},
                   {"C", bp.C},           {"lambda0", bp.lambda0},
                   {"t0", bp.t0},         {"a", bp.a},
                   {"kernel_constant", bp.kernel_constant}};
  return j;
}

inline BoundParams bound_params_from_json(const nlohmann::json& j) {
  BoundParams bp;
  bp.p = j.at("p").get<int>();
  bp.lip_sigma = j.at("lip_sigma").get<double>();
  bp.l_sigma = j.at("l_sigma").get<double>();
  bp.z_p = j.at("z_p").get<double>();
  bp.C = j.at("C").get<double>();
  bp.lambda0 = j.at("lambda0").get<double>();
  bp.t0 = j.at("t0").get<double>();
  bp.a = j.at("a").get<double>();
  bp.kernel_constant = j.at("kernel_constant").get<double>();
  return bp;
}

namespace detail {
inline nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
inline std::optional<double> optional_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}
}  // namespace detail

inline nlohmann::json to_json(const BoundReport& r) {
  return {{"p", r.p},
          {"noise_mode", r.noise_mode},
          {"lower_label", r.lower_label},
          {"gamma_hat", r.gamma_hat},
          {"gamma_std_error", r.gamma_std_error},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"t_min", r.t_min},
          {"t_max", r.t_max},
          {"r_squared", r.r_squared},
          {"upper_bound", r.upper_bound},
          {"upper_bound_zp_one", r.upper_bound_zp_one},
          {"upper_bound_zp_default", r.upper_bound_zp_default},
          {"lower_bound", detail::optional_number(r.lower_bound)},
          {"stable_rate", detail::optional_number(r.stable_rate)},
          {"upper_violated", r.upper_violated},
          {"lower_violated", r.lower_violated},
          {"params", to_json(r.params)},
          {"exponent_kind", r.exponent_kind},
          {"alpha", std::isfinite(r.alpha) ? nlohmann::json(r.alpha) : nlohmann::json(nullptr)}};
}

inline BoundReport bound_report_from_json(const nlohmann::json& j) {
  BoundReport r;
  r.p = j.at("p").get<int>();
  r.noise_mode = j.at("noise_mode").get<std::string>();
  r.lower_label = j.at("lower_label").get<std::string>();
  r.gamma_hat = j.at("gamma_hat").get<double>();
  r.gamma_std_error = j.at("gamma_std_error").get<double>();
  r.ci_low = j.at("ci_low").get<double>();
  r.ci_high = j.at("ci_high").get<double>();
  r.t_min = j.at("t_min").get<double>();
  r.t_max = j.at("t_max").get<double>();
  r.r_squared = j.at("r_squared").get<double>();
  r.upper_bound = j.at("upper_bound").get<double>();
  r.upper_bound_zp_one = j.at("upper_bound_zp_one").get<double>();
  r.upper_bound_zp_default = j.at("upper_bound_zp_default").get<double>();
  r.lower_bound = detail::optional_from(j.at("lower_bound"));
  r.stable_rate = detail::optional_from(j.at("stable_rate"));
  r.upper_violated = j.at("upper_violated").get<bool>();
  r.lower_violated = j.at("lower_violated").get<bool>();
  r.params = bound_params_from_json(j.at("params"));
  r.exponent_kind = j.at("exponent_kind").get<std::string>();
  r.alpha = j.at("alpha").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("alpha").get<double>();
  return r;
}

/// f(t) = c1 sum_{n >= 0} (kappa Gamma(rho))^n t^{n rho} / Gamma(n rho + 1),
/// the solution of f = c1 + kappa Int_0^t (t-s)^{rho-1} f(s) ds. Terms are
/// summed in log space, so large t does not overflow before the result does.
inline double renewal_solution(double c1, double kappa, double rho, double t) {
  if (!(rho > 0.0)) throw DomainError("renewal solution needs rho > 0");
  if (!(kappa >= 0.0)) throw DomainError("renewal solution needs kappa >= 0");
  if (!(c1 > 0.0)) throw DomainError("renewal solution needs c1 > 0");
  if (!(t >= 0.0)) throw DomainError("renewal solution needs t >= 0");
  if (kappa == 0.0 || t == 0.0) return c1;
  const double log_z = std::log(kappa * std::tgamma(rho)) + rho * std::log(t);
  // Terms rise to a peak near n rho ~ z^{1/rho} and then fall; stop once well past it.
  double peak = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (int n = 0; n < 1000000; ++n) {
    const double lt = n * log_z - std::lgamma(n * rho + 1.0);
    logs.push_back(lt);
    peak = std::max(peak, lt);
    if (lt < peak - 50.0 && n * rho > 1.0) break;
  }
  double sum = 0.0;
  for (double lt : logs) sum += std::exp(lt - peak);
  return c1 * std::exp(peak) * sum;
}

struct RenewalReport {
  double c1 = 1.0;
  double kappa = 0.0;
  double rho = 1.0;
  double rate = 0.0;
  std::vector<double> times;
  std::vector<double> solution;
  std::vector<double> bound;
  /// Smallest c2 with solution <= c2 exp(c3 rate t) on the grid.
  double c2 = 0.0;
  double c3 = 1.0;

  bool dominated() const {
    for (std::size_t k = 0; k < times.size(); ++k)
      if (solution[k] > bound[k] * (1.0 + 1e-12)) return false;
    return std::isfinite(c2);
  }
};

inline RenewalReport renewal_bound_check(double c1, double kappa, double rho, const std::vector<double>& t_grid) {
  if (!(rho > 0.0)) throw DomainError("renewal check needs rho > 0");
  if (!(kappa >= 0.0)) throw DomainError("renewal check needs kappa >= 0");
  if (!(c1 > 0.0)) throw DomainError("renewal check needs c1 > 0");
  RenewalReport r;
  r.c1 = c1;
  r.kappa = kappa;
  r.rho = rho;
  r.rate = renewal_growth_rate(rho, kappa);
  r.times = t_grid;
  for (double t : t_grid) {
    const double f = renewal_solution(c1, kappa, rho, t);
    r.solution.push_back(f);
    r.c2 = std::max(r.c2, f * std::exp(-r.c3 * r.rate * t));
  }
  for (double t : t_grid) r.bound.push_back(r.c2 * std::exp(r.c3 * r.rate * t));
  return r;
}

/// c1 + kappa Int_0^t (t-s)^{rho-1} f(s) ds for f = renewal_solution, with the
/// substitution w = (t-s)^rho removing the endpoint singularity.
inline double renewal_rhs(double c1, double kappa, double rho, double t) {
  if (t == 0.0 || kappa == 0.0) return c1;
  auto g = [&](double w) {
    const double s = std::max(0.0, t - std::pow(w, 1.0 / rho));
    return renewal_solution(c1, kappa, rho, s) / rho;
  };
  return c1 + kappa * quad::integrate(g, 0.0, std::pow(t, rho), 1e-12);
}

/// max_k |rhs(t_k) - f(t_k)| / f(t_k).
inline double renewal_residual(double c1, double kappa, double rho, const std::vector<double>& t_grid) {
  double worst = 0.0;
  for (double t : t_grid) {
    const double f = renewal_solution(c1, kappa, rho, t);
    worst = std::max(worst, std::abs(renewal_rhs(c1, kappa, rho, t) - f) / f);
  }
  return worst;
}

}  // namespace shelab
