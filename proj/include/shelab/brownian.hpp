#pragma once

// Brownian paths on a time grid, running suprema, first hitting times with an
// optional Brownian-bridge crossing correction, and Monte Carlo checks of the
// classical hitting-time and maximal identities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shelab/errors.hpp"
#include "shelab/parallel.hpp"
#include "shelab/rng.hpp"
#include "shelab/stats.hpp"

namespace shelab {

/// Number of grid steps covering [0, horizon].
inline std::size_t steps_for(double horizon, double dt) {
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

struct PathSample {
  double dt = 0.0;
  std::size_t n_steps = 0;
  /// B at t_k = k dt, k = 0..n_steps; values[0] = 0.
  std::vector<double> values;
  std::uint64_t seed = 0;

  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  double horizon() const { return time(n_steps); }
};

/// Reproducible path: increments are N(0, dt) draws from the path stream of `seed`.
inline PathSample sample_path(double horizon, double dt, std::uint64_t seed) {
  if (!(horizon > 0.0) || !(dt > 0.0)) throw DomainError("sample_path needs horizon > 0 and dt > 0");
  if (dt > horizon) throw DomainError("sample_path: dt exceeds horizon");
  PathSample path;
  path.dt = dt;
  path.seed = seed;
  path.n_steps = steps_for(horizon, dt);
  path.values.resize(path.n_steps + 1);
  RandomSource rng(stream_seed(seed, Stream::path));
  const double sd = std::sqrt(dt);
  path.values[0] = 0.0;
  for (std::size_t k = 0; k < path.n_steps; ++k) path.values[k + 1] = path.values[k] + sd * rng.normal();
  return path;
}

/// Prefix maximum S_{t_k} = max_{j <= k} B_{t_j}.
inline std::vector<double> running_sup(std::span<const double> values) {
  std::vector<double> s(values.size());
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) s[k] = m = std::max(m, values[k]);
  return s;
}

inline std::vector<double> running_sup(const PathSample& path) { return running_sup(path.values); }

struct HittingRecord {
  double level = 0.0;
  /// Empty when the level is not reached within the horizon.
  std::optional<double> hit_time;
  std::optional<std::size_t> hit_index;
  bool bridge_corrected = false;
};

namespace detail {

// Crossing probabilities below this are treated as zero.
inline constexpr double kNegligibleCrossing = 1e-30;

/// Probability that a Brownian bridge over dt from distance d0 > 0 to d1 > 0
/// below the level touches it.
inline double bridge_crossing_probability(double d0, double d1, double dt) {
  return std::exp(-2.0 * d0 * d1 / dt);
}

}  // namespace detail

/// First grid time at or beyond level a (a = 0 returns 0). With
/// `bridge_correct`, a crossing between two same-side grid points is declared
/// with probability exp(-2 (a - B_k)(a - B_{k+1}) / dt); the uniforms come
/// from `bridge_rng`. The reported time is the right end of the crossing step.
inline HittingRecord first_hitting(std::span<const double> values, double dt, double a,
                                   bool bridge_correct, RandomSource& bridge_rng) {
  HittingRecord rec;
  rec.level = a;
  rec.bridge_corrected = bridge_correct;
  if (a == 0.0) {
    rec.hit_time = 0.0;
    rec.hit_index = 0;
    return rec;
  }
  const double sign = a > 0.0 ? 1.0 : -1.0;
  const double level = std::abs(a);
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double d1 = level - sign * values[k + 1];
    bool hit = d1 <= 0.0;
    if (!hit && bridge_correct) {
      const double d0 = level - sign * values[k];
      const double prob = detail::bridge_crossing_probability(d0, d1, dt);
      if (prob > detail::kNegligibleCrossing) hit = bridge_rng.uniform() < prob;
    }
    if (hit) {
      rec.hit_index = k + 1;
      rec.hit_time = static_cast<double>(k + 1) * dt;
      return rec;
    }
  }
  return rec;
}

/// first_hitting on a PathSample; bridge uniforms come from the path's bridge stream.
inline HittingRecord first_hitting(const PathSample& path, double a, bool bridge_correct = true) {
  RandomSource bridge(stream_seed(path.seed, Stream::bridge));
  return first_hitting(path.values, path.dt, a, bridge_correct, bridge);
}

/// Hitting index of |level| on a dt-grid of n_steps steps, simulated without
/// materializing the path.
///
/// Far from the level the walk advances in blocks of m = floor((d/8)^2/dt)
/// steps drawn as one N(0, m dt) increment. A block is kept only if the
/// bridge crossing probability across it is below 1e-30; otherwise it is
/// filled in at resolution dt by sequential Brownian-bridge sampling and
/// scanned step by step. The result has the law of the grid estimator up to
/// that 1e-30 neglect.
inline std::optional<std::size_t> simulate_hitting_index(double level, double dt, std::size_t n_steps,
                                                         bool bridge_correct, RandomSource& rng) {
  level = std::abs(level);
  if (level == 0.0) return 0;
  const double sd = std::sqrt(dt);
  double w = 0.0;
  std::size_t idx = 0;
  auto fine_step = [&](double next) -> bool {
    const double d0 = level - w;
    const double d1 = level - next;
    w = next;
    ++idx;
    if (d1 <= 0.0) return true;
    if (!bridge_correct) return false;
    const double prob = detail::bridge_crossing_probability(d0, d1, dt);
    return prob > detail::kNegligibleCrossing && rng.uniform() < prob;
  };
  while (idx < n_steps) {
    const double d = level - w;
    const double span = (d / 8.0) * (d / 8.0) / dt;
    auto m = static_cast<std::size_t>(std::min(span, static_cast<double>(n_steps - idx)));
    if (m < 2) {
      if (fine_step(w + sd * rng.normal())) return idx;
      continue;
    }
    const double end = w + std::sqrt(static_cast<double>(m) * dt) * rng.normal();
    const double d_end = level - end;
    if (d_end > 0.0 &&
        detail::bridge_crossing_probability(d, d_end, static_cast<double>(m) * dt) <= detail::kNegligibleCrossing) {
      w = end;
      idx += m;
      continue;
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double remaining = static_cast<double>(m - j);
      const double next = j + 1 == m ? end
                                     : w + (end - w) / remaining +
                                           std::sqrt(dt * (remaining - 1.0) / remaining) * rng.normal();
      if (fine_step(next)) return idx;
    }
  }
  return std::nullopt;
}

struct HittingLaplaceReport {
  double a = 0.0;
  double lambda = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double exact = 0.0;
  /// Estimate with non-hitting paths contributing 0 instead of exp(-lambda H).
  double lower_bracket = 0.0;
  double bracket_width = 0.0;
  double fraction_hit = 0.0;
  std::size_t n_paths = 0;
  bool bridge_corrected = true;

  double tolerance() const { return 3.0 * std_error + 0.01 * exact; }
  bool within_tolerance() const { return std::abs(empirical - exact) <= tolerance(); }
};

/// Monte Carlo E[exp(-lambda T_a)] against exp(-|a| sqrt(2 lambda)).
/// Path i uses the hitting stream of derive_seed(seed, i).
inline HittingLaplaceReport hitting_laplace_check(double a, double lambda, std::size_t n_paths, double dt,
                                                  double horizon, std::uint64_t seed, unsigned workers = 1,
                                                  bool bridge_correct = true) {
  if (!(lambda > 0.0)) throw DomainError("hitting Laplace check needs lambda > 0");
  if (!(dt > 0.0) || !(horizon > 0.0)) throw DomainError("hitting Laplace check needs dt, horizon > 0");
  if (n_paths < 2) throw DomainError("hitting Laplace check needs at least 2 paths");
  if (std::exp(-lambda * horizon) >= 1e-4)
    throw ConfigError("horizon too short: exp(-lambda * horizon) = " + std::to_string(std::exp(-lambda * horizon)) +
                      " must be < 1e-4");
  const std::size_t n_steps = steps_for(horizon, dt);
  const double h = static_cast<double>(n_steps) * dt;
  std::vector<double> vals(n_paths);
  std::vector<char> hit(n_paths);
  parallel::for_each_index(n_paths, workers, [&](std::size_t i) {
    RandomSource rng(stream_seed(derive_seed(seed, i), Stream::hitting));
    const auto idx = simulate_hitting_index(a, dt, n_steps, bridge_correct, rng);
    hit[i] = idx.has_value();
    vals[i] = std::exp(-lambda * (idx ? static_cast<double>(*idx) * dt : h));
  });
  HittingLaplaceReport rep;
  rep.a = a;
  rep.lambda = lambda;
  rep.n_paths = n_paths;
  rep.bridge_corrected = bridge_correct;
  const auto est = stats::jackknife_mean(vals);
  rep.empirical = est.mean;
  rep.std_error = est.std_error;
  rep.exact = std::exp(-std::abs(a) * std::sqrt(2.0 * lambda));
  const auto n_hit = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  rep.fraction_hit = static_cast<double>(n_hit) / static_cast<double>(n_paths);
  rep.bracket_width = (1.0 - rep.fraction_hit) * std::exp(-lambda * h);
  rep.lower_bracket = rep.empirical - rep.bracket_width;
  return rep;
}

struct DoobReport {
  double p = 2.0;
  double constant = 4.0;
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  double rhs_se = 0.0;

  bool holds() const { return lhs <= rhs + 3.0 * std::hypot(lhs_se, rhs_se); }
};

/// lhs = mean(sup^p), rhs = (p/(p-1))^p mean(terminal^p) for nonnegative samples.
inline DoobReport doob_sides(std::span<const double> sups, std::span<const double> terminals, double p) {
  if (!(p > 1.0)) throw DomainError("Doob's inequality needs p > 1");
  DoobReport rep;
  rep.p = p;
  rep.constant = std::pow(p / (p - 1.0), p);
  std::vector<double> a(sups.size()), b(terminals.size());
  std::transform(sups.begin(), sups.end(), a.begin(), [&](double s) { return std::pow(s, p); });
  std::transform(terminals.begin(), terminals.end(), b.begin(), [&](double s) { return std::pow(s, p); });
  const auto l = stats::jackknife_mean(a);
  const auto r = stats::jackknife_mean(b);
  rep.lhs = l.mean;
  rep.lhs_se = l.std_error;
  rep.rhs = rep.constant * r.mean;
  rep.rhs_se = rep.constant * r.std_error;
  return rep;
}

/// Doob's maximal inequality for the submartingale X = |B| on [0, t].
inline DoobReport doob_check(double p, std::size_t n_paths, double t, double dt, std::uint64_t seed,
                             unsigned workers = 1) {
  if (!(p > 1.0)) throw DomainError("Doob's inequality needs p > 1");
  if (n_paths < 2) throw DomainError("doob_check needs at least 2 paths");
  std::vector<double> sups(n_paths), terms(n_paths);
  parallel::for_each_index(n_paths, workers, [&](std::size_t i) {
    const auto path = sample_path(t, dt, derive_seed(seed, i));
    double m = 0.0;
    for (double b : path.values) m = std::max(m, std::abs(b));
    sups[i] = m;
    terms[i] = std::abs(path.values.back());
  });
  return doob_sides(sups, terms, p);
}

struct SupTailReport {
  double a = 0.0;
  double t = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  /// exp(-a^2 t / 2)
  double bound = 0.0;
  /// 2 Phi(-a sqrt t), reflection principle.
  double exact = 0.0;
  double discretization_allowance = 0.0;

  bool below_bound() const { return empirical <= bound + 3.0 * std_error; }
  bool matches_exact() const {
    return std::abs(empirical - exact) <= 3.0 * std_error + discretization_allowance;
  }
};

/// P[S_t >= a t] estimated as P[T_{a t} <= t] with the bridge-corrected hitting
/// estimator; the discretization allowance is 0.1 sqrt(dt).
inline SupTailReport sup_tail_check(double a, double t, std::size_t n_paths, double dt, std::uint64_t seed,
                                    unsigned workers = 1) {
  if (!(a > 0.0) || !(t > 0.0)) throw DomainError("sup tail check needs a > 0 and t > 0");
  if (n_paths < 2) throw DomainError("sup tail check needs at least 2 paths");
  const std::size_t n_steps = steps_for(t, dt);
  std::vector<char> hit(n_paths);
  parallel::for_each_index(n_paths, workers, [&](std::size_t i) {
    RandomSource rng(stream_seed(derive_seed(seed, i), Stream::hitting));
    hit[i] = simulate_hitting_index(a * t, dt, n_steps, true, rng).has_value();
  });
  SupTailReport rep;
  rep.a = a;
  rep.t = t;
  const auto est = stats::binomial_estimate(static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1)), n_paths);
  rep.empirical = est.mean;
  rep.std_error = est.std_error;
  rep.bound = std::exp(-a * a * t / 2.0);
  rep.exact = 2.0 * stats::normal_cdf(-a * std::sqrt(t));
  rep.discretization_allowance = 0.1 * std::sqrt(dt);
  return rep;
}

struct DriftInfimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// inf_{lambda > 0} (-lambda a t + lambda^2 t / 2) = -a^2 t / 2 at lambda = a.
inline DriftInfimum drift_infimum(double a, double t) {
  if (!(a > 0.0) || !(t > 0.0)) throw DomainError("drift infimum needs a > 0 and t > 0");
  return {a, -a * a * t / 2.0};
}

/// exp(lambda S_t - lambda^2 t / 2) <= max_k M_{t_k}^lambda on one grid path.
inline bool sup_martingale_dominates(const PathSample& path, double lambda) {
  const double s = *std::max_element(path.values.begin(), path.values.end());
  const double t = path.horizon();
  double best = 0.0;
  for (std::size_t k = 0; k < path.values.size(); ++k)
    best = std::max(best, std::exp(lambda * path.values[k] - 0.5 * lambda * lambda * path.time(k)));
  return std::exp(lambda * s - 0.5 * lambda * lambda * t) <= best;
}

struct RestartReport {
  std::size_t n_hit = 0;
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
  double lag = 0.0;
};

/// Increments B_{T + lag} - B_T after the first grid index T at or beyond a.
/// By the strong Markov property these are N(0, lag).
inline RestartReport markov_restart_check(double a, double lag, std::size_t n_paths, double dt, double horizon,
                                          std::uint64_t seed, unsigned workers = 1) {
  if (!(lag > 0.0)) throw DomainError("restart lag must be > 0");
  const std::size_t lag_steps = steps_for(lag, dt);
  std::vector<double> incr(n_paths, 0.0);
  std::vector<char> ok(n_paths, 0);
  parallel::for_each_index(n_paths, workers, [&](std::size_t i) {
    const auto path = sample_path(horizon + lag, dt, derive_seed(seed, i));
    RandomSource unused(0);
    const auto rec = first_hitting(std::span<const double>(path.values).first(steps_for(horizon, dt) + 1), dt, a,
                                   false, unused);
    if (!rec.hit_index) return;
    const std::size_t k = *rec.hit_index;
    incr[i] = path.values[k + lag_steps] - path.values[k];
    ok[i] = 1;
  });
  std::vector<double> x, x2;
  for (std::size_t i = 0; i < n_paths; ++i) {
    if (!ok[i]) continue;
    x.push_back(incr[i]);
    x2.push_back(incr[i] * incr[i]);
  }
  RestartReport rep;
  rep.lag = static_cast<double>(lag_steps) * dt;
  rep.n_hit = x.size();
  if (x.size() < 2) return rep;
  const auto m = stats::jackknife_mean(x);
  const auto v = stats::jackknife_mean(x2);
  rep.mean = m.mean;
  rep.mean_se = m.std_error;
  rep.variance = v.mean;  // mean is known to be 0 under the null
  rep.variance_se = v.std_error;
  return rep;
}

/// Monte Carlo E[M_t^lambda] with B_t drawn exactly as sqrt(t) Z; path i uses
/// the path stream of derive_seed(seed, i).
inline stats::MeanEstimate martingale_mean_check(double lambda, double t, std::size_t n_paths, std::uint64_t seed,
                                                 unsigned workers = 1) {
  if (!(t >= 0.0)) throw DomainError("martingale mean check needs t >= 0");
  if (n_paths < 2) throw DomainError("martingale mean check needs at least 2 paths");
  std::vector<double> vals(n_paths);
  parallel::for_each_index(n_paths, workers, [&](std::size_t i) {
    RandomSource rng(stream_seed(derive_seed(seed, i), Stream::path));
    const double b = std::sqrt(t) * rng.normal();
    vals[i] = std::exp(lambda * b - 0.5 * lambda * lambda * t);
  });
  return stats::jackknife_mean(vals);
}

}  // namespace shelab
