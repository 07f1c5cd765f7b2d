// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is the number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "shelab/brownian.hpp"
#include "shelab/config.hpp"
#include "shelab/kernels.hpp"
#include "shelab/levy.hpp"
#include "shelab/martingale.hpp"
#include "shelab/moments.hpp"
#include "shelab/parallel.hpp"
#include "shelab/runner.hpp"
#include "shelab/spde.hpp"

using namespace shelab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string num(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

unsigned workers() { return parallel::default_workers(); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

// ---------------------------------------------------------------------------

Outcome upsilon_oracle() {
  Outcome o;
  const auto bm = LevyExponent::brownian();
  for (double beta : {0.1, 0.5, 2.0, 10.0, 100.0}) {
    const double exact = 1.0 / (2.0 * std::sqrt(2.0 * beta));
    const double v = upsilon(bm, beta);
    const double rel = std::abs(v - exact) / exact;
    o.check(rel <= 1e-6, "Upsilon(" + num(beta) + ") = " + num(v, 12) + ", closed form rel err " + num(rel, 3));
    const double back = upsilon_inverse(bm, v);
    const double rt = std::abs(back - beta) / beta;
    o.check(rt <= 1e-6, "Upsilon^{-1}(Upsilon(" + num(beta) + ")) rel err " + num(rt, 3));
  }
  return o;
}

Outcome upsilon_dual_route() {
  Outcome o;
  for (double alpha : {1.5, 2.0})
    for (double beta : {1.0, 4.0}) {
      const double q = upsilon(LevyExponent::alpha_stable(alpha), beta);
      const double l = upsilon_laplace_route(alpha, beta);
      const double rel = std::abs(q - l) / q;
      o.check(rel <= 1e-4, "alpha " + num(alpha) + ", beta " + num(beta) + ": quadrature " + num(q, 10) +
                               ", Laplace route " + num(l, 10) + ", rel diff " + num(rel, 3));
    }
  return o;
}

Outcome kernel_envelope() {
  Outcome o;
  const double alpha = 1.5;
  const auto ts = linspace(0.1, 2.0, 8);
  std::vector<double> xs;
  for (double x : linspace(0.0, 10.0, 21)) {
    xs.push_back(x);
    if (x > 0.0) xs.push_back(-x);
  }
  const auto rep = kernel_bound_check(alpha, ts, xs);
  o.check(std::isfinite(rep.c) && rep.min_ratio > 0.0,
          "ratio range [" + num(rep.min_ratio) + ", " + num(rep.max_ratio) + "], c = " + num(rep.c) + " over " +
              std::to_string(rep.ratios.size()) + " points");
  double worst = 0.0;
  for (double l : {0.7, 1.3}) {
    for (const auto& r : rep.ratios) {
      const double ts2 = std::pow(l, alpha) * r.t, xs2 = l * r.x;
      const double scaled = stable_density(alpha, ts2, xs2) / stable_envelope(alpha, ts2, xs2);
      worst = std::max(worst, std::abs(scaled / r.ratio - 1.0));
    }
  }
  o.check(worst <= 0.01, "ratio change under (t, x) -> (l^alpha t, l x), l in {0.7, 1.3}: max rel " + num(worst, 3));
  return o;
}

Outcome hermite_martingale() {
  Outcome o;
  double worst_deriv = 0.0;
  const double h = 1e-3;
  for (int n = 1; n <= 10; ++n)
    for (double x = -5.0; x <= 5.0 + 1e-12; x += 0.25) {
      const double d =
          (-hermite(n, x + 2 * h) + 8 * hermite(n, x + h) - 8 * hermite(n, x - h) + hermite(n, x - 2 * h)) / (12 * h);
      const double e = n * hermite(n - 1, x);
      worst_deriv = std::max(worst_deriv, std::abs(d - e) / std::max(1.0, std::abs(e)));
    }
  o.check(worst_deriv <= 1e-6, "h_n' = n h_{n-1}, n <= 10, |x| <= 5: max rel err " + num(worst_deriv, 3));
  double worst_series = 0.0;
  for (double lambda = -1.0; lambda <= 1.0 + 1e-12; lambda += 0.125)
    for (double b = -2.0; b <= 2.0 + 1e-12; b += 0.25)
      for (double t : {0.0, 0.25, 0.5, 1.0, 1.5, 2.0})
        worst_series = std::max(worst_series, std::abs(martingale_series(lambda, b, t, 30) - exp_martingale(lambda, b, t)));
  o.check(worst_series <= 1e-8, "30-term series vs exp(lambda B - lambda^2 t / 2): max abs err " + num(worst_series, 3));
  for (double lambda : {0.5, 1.0}) {
    const auto est = martingale_mean_check(lambda, 1.0, 100000, 4001, workers());
    o.check(std::abs(est.mean - 1.0) <= 3.0 * est.std_error,
            "E[M_1^" + num(lambda) + "] = " + num(est.mean, 8) + " +/- " + num(est.std_error, 3) + " (1e5 paths)");
  }
  return o;
}

Outcome hitting_laplace() {
  Outcome o;
  const std::pair<double, double> cases[] = {{1.0, 0.5}, {2.0, 0.5}, {1.0, 2.0}};
  std::uint64_t seed = 5001;
  for (auto [a, lambda] : cases) {
    const auto rep = hitting_laplace_check(a, lambda, 200000, 1e-4, 12.0 / lambda, seed++, workers());
    o.check(rep.within_tolerance(), "a " + num(a) + ", lambda " + num(lambda) + ": " + num(rep.empirical, 7) +
                                        " vs exp(-|a| sqrt(2 lambda)) = " + num(rep.exact, 7) + ", tolerance " +
                                        num(rep.tolerance(), 3));
  }
  return o;
}

Outcome doob_sup_tail() {
  Outcome o;
  const double dt = 1e-3;
  std::uint64_t seed = 6001;
  for (double t : {1.0, 2.0})
    for (double p : {2.0, 4.0}) {
      const auto rep = doob_check(p, 100000, t, dt, seed++, workers());
      o.check(rep.lhs <= rep.rhs, "Doob p " + num(p) + ", t " + num(t) + ": E sup|B|^p = " + num(rep.lhs) +
                                      " <= " + num(rep.constant) + " E|B_t|^p = " + num(rep.rhs));
    }
  const std::pair<double, double> cases[] = {{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}};
  for (auto [a, t] : cases) {
    const auto rep = sup_tail_check(a, t, 100000, dt, seed++, workers());
    o.check(rep.empirical <= rep.bound, "P[sup B >= a t], a " + num(a) + ", t " + num(t) + ": " +
                                            num(rep.empirical) + " <= exp(-a^2 t / 2) = " + num(rep.bound));
    o.check(rep.matches_exact(), "  reflection 2 Phi(-a sqrt t) = " + num(rep.exact) + ", |diff| " +
                                     num(std::abs(rep.empirical - rep.exact), 3) + " <= 3 se + allowance = " +
                                     num(3.0 * rep.std_error + rep.discretization_allowance, 3));
  }
  return o;
}

Outcome additive_variance() {
  Outcome o;
  ModelSpec m;
  m.sigma = {0.0, 1.0};
  m.u0_constant = 1.0;
  Discretization d;
  d.grid = {6.4, 256};
  d.dt = 1e-3;
  d.horizon = 2.0;
  d.output_stride = 100;
  const auto s = estimate_moments(m, d, {2}, 2000, 7001, workers())[0];
  int checked = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double t = s.times[k];
    if (t < 0.5 - 1e-9) continue;
    const double ref = std::sqrt(t / (2.0 * std::numbers::pi));
    const double got = s.estimates[k] - 1.0;
    const double tol = 3.0 * s.std_error[k] + 0.05 * ref;
    o.check(std::abs(got - ref) <= tol,
            "t " + num(t, 3) + ": E u^2 - 1 = " + num(got) + " vs sqrt(t / 2 pi) = " + num(ref) + ", tol " + num(tol, 3));
    ++checked;
  }
  o.check(checked == 16, std::to_string(checked) + " output times in [0.5, 2]");
  return o;
}

struct PicardRun {
  double beta = 0.0;
  double factor = 0.0;
  std::vector<double> norms;
};

PicardRun picard_contraction_run(std::size_t n_replicas, unsigned n_workers) {
  ModelSpec m;
  m.sigma = {0.25, 0.0};
  m.noise = noise::CappedMartingale{0.5};
  Discretization d;
  d.grid = {3.2, 128};
  d.dt = 1e-3;
  d.horizon = 1.0;
  ContractionConstants cc;
  cc.p = 2;
  cc.t0 = d.horizon;
  PicardRun run;
  const double q = moment_constant(contraction_bound_params(m, cc));
  const double target = 0.5 / (q * m.sigma.lip);
  run.beta = upsilon_inverse(LevyExponent::alpha_stable(m.alpha), target * target) * cc.p / 2.0;
  run.factor = contraction_factor(m, cc, run.beta);
  constexpr int n_iter = 6;
  using Acc = std::vector<FieldMoments>;
  auto map = [&](std::size_t lo, std::size_t hi) {
    Acc acc(n_iter);
    for (auto& a : acc) a.p = cc.p;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto it = picard_solve(m, make_noise_slab(m, d, derive_seed(8001, i)), n_iter);
      for (int n = 0; n < n_iter; ++n) acc[n].add(field_difference(it[n + 1], it[n]));
    }
    return acc;
  };
  auto fold = [](Acc& into, Acc&& part) {
    for (std::size_t n = 0; n < into.size(); ++n) into[n].merge(std::move(part[n]));
  };
  Acc init(n_iter);
  for (auto& a : init) a.p = cc.p;
  const auto total = parallel::ordered_map_reduce(n_replicas, 25, n_workers, std::move(init), map, fold);
  for (const auto& fm : total) run.norms.push_back(weighted_norm(fm, run.beta));
  return run;
}

Outcome picard_contraction() {
  Outcome o;
  const auto run = picard_contraction_run(500, workers());
  o.check(std::abs(run.factor - 0.5) < 1e-6,
          "beta = " + num(run.beta) + " gives Q_p Lip sqrt(Upsilon(2 beta / p)) = " + num(run.factor));
  for (int n = 2; n <= 5; ++n) {
    const double r = run.norms[n] / run.norms[n - 1];
    o.check(r <= 0.7, "iteration " + std::to_string(n) + ": ||v" + std::to_string(n + 1) + " - v" + std::to_string(n) +
                          "|| / ||v" + std::to_string(n) + " - v" + std::to_string(n - 1) + "|| = " + num(r));
  }
  return o;
}

Outcome resolvent_bound() {
  Outcome o;
  for (double alpha : {1.5, 2.0})
    for (double beta : {1.0, 4.0}) {
      const auto rep = resolvent_bound_check(LevyExponent::alpha_stable(alpha), beta, 50.0);
      const double gap = std::abs(rep.lhs - rep.rhs) / rep.rhs;
      o.check(rep.holds() && gap <= 1e-3, "alpha " + num(alpha) + ", beta " + num(beta) + ": lhs " + num(rep.lhs, 10) +
                                              ", Upsilon " + num(rep.rhs, 10) + ", rel gap " + num(gap, 3));
      const auto part = resolvent_bound_check(LevyExponent::alpha_stable(alpha), beta, 0.5);
      o.check(part.holds(), "  t_max 0.5: lhs " + num(part.lhs) + " <= Upsilon");
    }
  return o;
}

Outcome renewal() {
  Outcome o;
  const auto grid = linspace(0.0, 10.0, 101);
  const std::pair<double, double> cases[] = {{1.0, 1.0}, {0.5, 1.0}, {0.5, 4.0}};
  for (auto [rho, kappa] : cases) {
    const double c1 = 1.0;
    const double resid = renewal_residual(c1, kappa, rho, grid);
    o.check(resid <= 1e-4, "rho " + num(rho) + ", kappa " + num(kappa) + ": integral equation residual " + num(resid, 3));
    const auto rep = renewal_bound_check(c1, kappa, rho, grid);
    o.check(rep.dominated(), "  rate " + num(rep.rate) + ", c2 = " + num(rep.c2, 10) + " with c3 = 1");
    if (rho == 1.0) o.check(std::abs(rep.c2 - c1) <= 1e-6, "  tight: |c2 - c1| = " + num(std::abs(rep.c2 - c1), 3));
  }
  return o;
}

// Least-squares slope of ln(values) on the last half of the times.
double last_half_slope(const std::vector<double>& t, const std::vector<double>& v) {
  const double t_lo = t.front() + 0.5 * (t.back() - t.front());
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_lo - 1e-12) continue;
    const double y = std::log(v[k]);
    n += 1;
    sx += t[k];
    sy += y;
    sxx += t[k] * t[k];
    sxy += t[k] * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Discretization growth_disc() {
  Discretization d;
  d.grid = {3.2, 128};
  d.dt = 5e-4;
  d.horizon = 8.0;
  d.output_stride = 100;
  return d;
}

Outcome growth_bounds() {
  Outcome o;
  const auto d = growth_disc();
  std::vector<double> slopes;
  for (double lip : {1.0, 2.0, 4.0}) {
    ModelSpec m;
    m.sigma = {lip, 0.0};
    const auto s = estimate_moments(m, d, {2}, 4000, 11001 + static_cast<std::uint64_t>(lip), workers())[0];
    const auto diag = fit_with_diagnostic(s);
    slopes.push_back(diag.fit.slope);
    const auto rec = second_moment_recursion(m, d);
    const double exact_slope = last_half_slope(s.times, rec);
    o.note("white, lip " + num(lip) + ": gamma_hat(2) = " + num(diag.fit.slope) + " +/- " +
           num(diag.fit.slope_std_error, 3) + " on [" + num(diag.fit.t_min) + ", " + num(diag.fit.t_max) +
           "]; exact second-moment recursion of the scheme gives " + num(exact_slope) + "; E u^2(8): MC " +
           num(s.estimates.back()) + ", exact " + num(rec.back()) + "; blow-ups " + std::to_string(s.flagged_blowups));
    if (diag.drift_warning) o.note("  drift warning: last-third slope " + num(*diag.last_third_slope));
    if (lip >= 2.0) o.check(diag.fit.slope > 0.0, "gamma_hat(2) > 0 at lip " + num(lip));
  }
  o.check(slopes[0] < slopes[1] && slopes[1] < slopes[2],
          "gamma_hat(2) strictly increasing in lip: " + num(slopes[0]) + ", " + num(slopes[1]) + ", " + num(slopes[2]));

  ModelSpec fz;
  fz.sigma = {1.0, 0.0};
  fz.l_sigma = 1.0;
  fz.noise = noise::FrozenHitting{0.0, 1.0};
  const auto s = estimate_moments(fz, d, {2}, 4000, 11100, workers())[0];
  const auto fit = fit_lyapunov(s);
  BoundParams bp;
  bp.p = 2;
  bp.lip_sigma = 1.0;
  bp.l_sigma = 1.0;
  bp.C = 1.0;
  bp.a = 0.0;
  const auto rep = compare_bounds(fit, LevyExponent::brownian(), bp, "frozen_hitting");
  const auto rec = second_moment_recursion(fz, d);
  o.note("frozen_hitting a = 0: lower reference " + num(rep.lower_bound.value_or(NAN), 10) + " (pi/8 = " +
         num(std::numbers::pi / 8.0, 10) + ", " + rep.lower_label + "); upper bound " + num(rep.upper_bound) +
         " (z_p = 1: " + num(rep.upper_bound_zp_one) + ")");
  o.note("frozen_hitting: exact second-moment recursion of the scheme gives " + num(last_half_slope(s.times, rec)) +
         "; lower reference " + (rep.lower_violated ? "above" : "not above") + " the fitted CI");
  o.check(rep.gamma_hat > 0.0, "frozen_hitting gamma_hat(2) = " + num(rep.gamma_hat) + ", 95% CI [" +
                                   num(rep.ci_low) + ", " + num(rep.ci_high) + "] > 0");
  return o;
}

// Runs `text` with workers 1, reruns its manifest with workers 3, and compares every artifact byte for byte.
bool manifest_rerun_identical(const std::string& name, const std::string& text, Outcome& o) {
  const auto root = fs::temp_directory_path() / "shelab_acceptance" / name;
  fs::remove_all(root);
  runner::RunOptions a;
  a.workers = 1;
  a.output_dir = root / "w1";
  const auto first = runner::run(config::validate_text(text), a);
  runner::RunOptions b;
  b.workers = 3;
  b.output_dir = root / "rerun_w3";
  const auto second = runner::run(runner::config_from_manifest(root / "w1" / "manifest.json"), b);
  bool same = first.files.size() == second.files.size() && !first.files.empty();
  for (std::size_t i = 0; same && i < first.files.size(); ++i)
    same = first.files[i].name == second.files[i].name &&
           io::read_file(a.output_dir / first.files[i].name) == io::read_file(b.output_dir / second.files[i].name);
  o.check(same, name + ": " + std::to_string(first.files.size()) + " artifact(s) identical after manifest rerun at 3 workers");
  return same;
}

Outcome determinism() {
  Outcome o;
  manifest_rerun_identical("martingale", "[martingale]\nlambda = 1\npaths = 20000\nmaster_seed = 4001\n", o);
  manifest_rerun_identical("hitting", "[hitting]\na = 1\nlambda = 2\npaths = 20000\ndt = 0.001\nmaster_seed = 5001\n", o);
  manifest_rerun_identical("additive_variance",
                           "[moments]\nlip = 0\nintercept = 1\nhalf_width = 6.4\nn_points = 256\nhorizon = 0.5\n"
                           "output_stride = 100\nn_replicas = 200\nmaster_seed = 7001\n",
                           o);
  manifest_rerun_identical("growth_white",
                           "[bounds]\nlip = 2\nl_sigma = 2\ndt = 0.0005\nhorizon = 1\noutput_stride = 100\n"
                           "p_list = 2, 4\nn_replicas = 200\nmaster_seed = 11003\n",
                           o);
  manifest_rerun_identical("growth_frozen",
                           "[bounds]\nlip = 1\nl_sigma = 1\nnoise_mode = frozen_hitting\na = 0\ndt = 0.0005\n"
                           "horizon = 1\noutput_stride = 100\nn_replicas = 200\nmaster_seed = 11100\n",
                           o);
  // Criteria without a CLI command: compare library results at 1 and 3 workers.
  const auto d1 = doob_check(4.0, 20000, 1.0, 1e-3, 6001, 1), d3 = doob_check(4.0, 20000, 1.0, 1e-3, 6001, 3);
  o.check(d1.lhs == d3.lhs && d1.rhs == d3.rhs, "Doob sides identical at 1 and 3 workers");
  const auto s1 = sup_tail_check(1.0, 1.0, 20000, 1e-3, 6005, 1), s3 = sup_tail_check(1.0, 1.0, 20000, 1e-3, 6005, 3);
  o.check(s1.empirical == s3.empirical, "sup-tail estimate identical at 1 and 3 workers");
  const auto p1 = picard_contraction_run(50, 1), p3 = picard_contraction_run(50, 3);
  o.check(p1.norms == p3.norms, "Picard difference norms identical at 1 and 3 workers");
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "upsilon closed form and inverse round trip", 1.0, upsilon_oracle},
      {2, "upsilon by quadrature and by the Laplace route", 10.0, upsilon_dual_route},
      {3, "stable kernel two-sided envelope and scale invariance", 30.0, kernel_envelope},
      {4, "hermite identities, martingale series and mean", 30.0, hermite_martingale},
      {5, "hitting-time Laplace transform", 120.0, hitting_laplace},
      {6, "doob maximal inequality and supremum tail", 60.0, doob_sup_tail},
      {7, "additive-noise variance", 300.0, additive_variance},
      {8, "picard contraction in the weighted norm", 300.0, picard_contraction},
      {9, "resolvent bound and its limit", 10.0, resolvent_bound},
      {10, "renewal inequality solution and exponential bound", 10.0, renewal},
      {11, "growth-bound consistency", 1800.0, growth_bounds},
      {12, "determinism across workers and manifest reruns", 1800.0, determinism},
  };
  std::printf("acceptance run with %u worker(s)\n", workers());
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_seconds;
    const bool pass = o.pass && in_budget;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.budget_seconds, in_budget ? "" : ", over budget");
    for (const auto& line : o.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
