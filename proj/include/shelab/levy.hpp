#pragma once

// Characteristic exponents, the resolvent integral
//
//     Upsilon(beta) = (1 / 2 pi) * Integral_R d xi / (beta + 2 Re Psi(xi)),
//
// its inverse, and the closed-form moment growth bounds built on them.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shelab/errors.hpp"
#include "shelab/quadrature.hpp"

namespace shelab {

enum class ExponentKind { brownian, alpha_stable, tabulated };

/// Real part of the characteristic exponent of a symmetric Levy process.
///
/// `brownian` is Psi(xi) = xi^2, `alpha_stable` is |xi|^alpha, and
/// `tabulated` linearly interpolates sampled (xi, Re Psi(xi)) pairs given for
/// xi >= 0 (evenness supplies xi < 0).
class LevyExponent {
 public:
  static LevyExponent brownian() { return LevyExponent(ExponentKind::brownian, 2.0, {}); }

  /// Accepts alpha in (0, 2]; operations needing alpha > 1 check it themselves.
  static LevyExponent alpha_stable(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0))
      throw DomainError("alpha-stable exponent needs alpha in (0, 2], got " + std::to_string(alpha));
    return LevyExponent(ExponentKind::alpha_stable, alpha, {});
  }

  /// Table must start at (0, 0), have strictly increasing xi and nonnegative values.
  static LevyExponent tabulated(std::vector<std::pair<double, double>> table) {
    if (table.size() < 3) throw DomainError("tabulated exponent needs at least 3 nodes");
    if (table.front().first != 0.0 || table.front().second != 0.0)
      throw DomainError("tabulated exponent must start at (0, 0)");
    for (std::size_t i = 1; i < table.size(); ++i) {
      if (!(table[i].first > table[i - 1].first))
        throw DomainError("tabulated exponent: xi nodes must be strictly increasing");
      if (!(table[i].second >= 0.0)) throw DomainError("tabulated exponent: Re Psi must be >= 0");
    }
    return LevyExponent(ExponentKind::tabulated, 0.0, std::move(table));
  }

  ExponentKind kind() const noexcept { return kind_; }

  /// Stability index; 2 for brownian, 0 for tabulated.
  double alpha() const noexcept { return alpha_; }

  const std::vector<std::pair<double, double>>& table() const noexcept { return table_; }

  double operator()(double xi) const {
    const double a = std::abs(xi);
    switch (kind_) {
      case ExponentKind::brownian:
        return a * a;
      case ExponentKind::alpha_stable:
        return alpha_ == 2.0 ? a * a : std::pow(a, alpha_);
      case ExponentKind::tabulated:
        break;
    }
    if (a > table_.back().first)
      throw DomainError("xi = " + std::to_string(xi) + " outside tabulated range [-" +
                        std::to_string(table_.back().first) + ", " +
                        std::to_string(table_.back().first) + "]");
    auto hi = std::upper_bound(table_.begin(), table_.end(), a,
                               [](double v, const auto& node) { return v < node.first; });
    if (hi == table_.end()) return table_.back().second;
    auto lo = std::prev(hi);
    const double w = (a - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  }

 private:
  LevyExponent(ExponentKind k, double alpha, std::vector<std::pair<double, double>> table)
      : kind_(k), alpha_(alpha), table_(std::move(table)) {}

  ExponentKind kind_;
  double alpha_;
  std::vector<std::pair<double, double>> table_;
};

/// Re Psi(xi).
inline double psi(const LevyExponent& exp, double xi) { return exp(xi); }

/// Inputs of the growth bounds.
struct BoundParams {
  int p = 2;
  double lip_sigma = 1.0;
  double l_sigma = 1.0;
  /// Moment (BDG-type) constant; defaults to 2 sqrt(p) when unset.
  std::optional<double> z_p;
  /// Mixing-measure constant of dmu(lambda) = C exp(-lambda^2/2) d lambda.
  double C = 1.0;
  double lambda0 = 0.0;
  double t0 = 0.0;
  /// Hitting level used by the lower bound.
  double a = 0.0;
  /// Constant c in kappa = c z_p^2 Lip^2 (p/(p-1))^2 exp(lambda0^2 t0 (p-1)).
  double kernel_constant = 1.0;

  double effective_z_p() const { return z_p.value_or(2.0 * std::sqrt(static_cast<double>(p))); }

  void validate() const {
    if (p < 2 || p % 2 != 0) throw DomainError("p must be an even integer >= 2");
    if (!(lip_sigma >= 0.0) || !std::isfinite(lip_sigma)) throw DomainError("Lip_sigma must be finite and >= 0");
    if (!(l_sigma >= 0.0) || !std::isfinite(l_sigma)) throw DomainError("L_sigma must be finite and >= 0");
    if (!(effective_z_p() > 0.0) || !std::isfinite(effective_z_p())) throw DomainError("z_p must be finite and > 0");
    if (!(C > 0.0) || !std::isfinite(C)) throw DomainError("C must be finite and > 0");
    if (!std::isfinite(lambda0)) throw DomainError("lambda0 must be finite");
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw DomainError("t0 must be finite and >= 0");
    if (!std::isfinite(a)) throw DomainError("a must be finite");
    if (!(kernel_constant >= 0.0) || !std::isfinite(kernel_constant))
      throw DomainError("kernel constant must be finite and >= 0");
  }
};

namespace detail {

// Integral_{from}^{inf} d xi / (beta + 2 c xi^g) for g > 1. Integrates
// numerically until beta / (2 c xi^g) <= 0.1, then sums the convergent series
// sum_k (-beta)^k (2c)^-(k+1) xi^(1 - g(k+1)) / (g(k+1) - 1).
inline double power_law_tail(double beta, double c, double g, double from) {
  const double cutoff = std::max(from, std::pow(beta / (0.2 * c), 1.0 / g));
  const double body =
      cutoff > from
          ? quad::integrate([&](double xi) { return 1.0 / (beta + 2.0 * c * std::pow(xi, g)); }, from, cutoff)
          : 0.0;
  const double r = beta / (2.0 * c * std::pow(cutoff, g));
  const double lead = cutoff / (2.0 * c * std::pow(cutoff, g));
  double series = 0.0;
  double rk = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double term = lead * rk / (g * (k + 1) - 1.0);
    series += term;
    if (std::abs(term) <= 1e-18 * std::abs(series)) break;
    rk *= -r;
  }
  return body + series;
}

}  // namespace detail

/// Upsilon(beta) to about 1e-12 relative: quadrature on a finite window plus a
/// closed-form power-law tail.
inline double upsilon(const LevyExponent& exp, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw DomainError("upsilon needs beta > 0, got " + std::to_string(beta));
  double half_line = 0.0;  // Integral over xi >= 0
  if (exp.kind() == ExponentKind::tabulated) {
    const auto& tab = exp.table();
    // On a linear segment the integrand is 1/(c0 + (c1 - c0) w), w in [0, 1].
    for (std::size_t i = 1; i < tab.size(); ++i) {
      const double h = tab[i].first - tab[i - 1].first;
      const double c0 = beta + 2.0 * tab[i - 1].second;
      const double c1 = beta + 2.0 * tab[i].second;
      const double r = (c1 - c0) / c0;
      half_line += std::abs(r) < 1e-6 ? h / c0 * (1.0 - r / 2.0 + r * r / 3.0) : h * std::log1p(r) / (c1 - c0);
    }
    const auto [x0, y0] = tab[tab.size() - 2];
    const auto [x1, y1] = tab.back();
    if (!(y0 > 0.0 && y1 > 0.0))
      throw DivergenceError("tabulated exponent: cannot extrapolate a power-law tail from zero values");
    const double g = std::log(y1 / y0) / std::log(x1 / x0);
    if (!(g > 1.0))
      throw DivergenceError("tabulated exponent grows like |xi|^" + std::to_string(g) +
                            " <= |xi|^1 at infinity; Upsilon diverges");
    half_line += detail::power_law_tail(beta, y1 / std::pow(x1, g), g, x1);
  } else {
    const double alpha = exp.alpha();
    if (!(alpha > 1.0))
      throw DivergenceError("Upsilon diverges for alpha <= 1 (alpha = " + std::to_string(alpha) + ")");
    // The integrand turns over at xi_s = (beta/2)^(1/alpha); split there.
    const double knee = std::pow(beta / 2.0, 1.0 / alpha);
    const double f = [&] {
      auto g = [&](double xi) { return 1.0 / (beta + 2.0 * exp(xi)); };
      // |xi|^alpha is not smooth at 0; tanh-sinh copes with the endpoint.
      return quad::integrate_singular(g, 0.0, knee) + quad::integrate(g, knee, 4.0 * knee);
    }();
    half_line = f + detail::power_law_tail(beta, 1.0, alpha, 4.0 * knee);
  }
  return half_line / std::numbers::pi;
}

namespace detail {
inline constexpr double kBisectionRelTol = 1e-8;
inline constexpr int kBisectionMaxIter = 200;
}  // namespace detail

/// Upsilon^{-1}(t) := sup{beta > 0 : Upsilon(beta) > t}, by bisection in log beta.
/// The result satisfies |Upsilon(beta) - t| <= 1e-8 t.
inline double upsilon_inverse(const LevyExponent& exp, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw RangeError("upsilon_inverse needs t > 0, got " + std::to_string(t));
  double lo = 1.0, hi = 1.0;
  if (upsilon(exp, 1.0) > t) {
    int guard = 0;
    while (upsilon(exp, hi) > t) {
      lo = hi;
      hi *= 16.0;
      if (++guard > detail::kBisectionMaxIter || !std::isfinite(hi))
        throw RangeError("upsilon_inverse: t = " + std::to_string(t) + " below the range of Upsilon");
    }
  } else {
    int guard = 0;
    while (upsilon(exp, lo) <= t) {
      hi = lo;
      lo /= 16.0;
      if (++guard > detail::kBisectionMaxIter || lo < 1e-300)
        throw RangeError("upsilon_inverse: t = " + std::to_string(t) + " above sup Upsilon");
    }
  }
  double mid = std::sqrt(lo * hi);
  for (int it = 0; it < detail::kBisectionMaxIter; ++it) {
    mid = std::sqrt(lo * hi);
    const double v = upsilon(exp, mid);
    if (std::abs(v - t) <= detail::kBisectionRelTol * t) break;
    (v > t ? lo : hi) = mid;
  }
  return mid;
}

/// Q_p = z_p (p/(p-1)) exp(lambda0^2 t0 (p-1)/2).
inline double moment_constant(const BoundParams& bp) {
  const double p = bp.p;
  return bp.effective_z_p() * (p / (p - 1.0)) *
         std::exp(bp.lambda0 * bp.lambda0 * bp.t0 * (p - 1.0) / 2.0);
}

/// inf{beta > 0 : Upsilon(2 beta / p) < 1/Q^2} with Q = z_p C Lip (p/(p-1)) exp(lambda0^2 t0 (p-1)/2).
/// Returns 0 when Q = 0.
inline double upper_lyapunov_bound(const LevyExponent& exp, const BoundParams& bp) {
  bp.validate();
  const double q = moment_constant(bp) * bp.C * bp.lip_sigma;
  if (q == 0.0) return 0.0;
  return 0.5 * bp.p * upsilon_inverse(exp, 1.0 / (q * q));
}

/// K^2 = L^2 C^2 sqrt(pi) exp((a - |a|/sqrt 2)^2).
inline double lower_bound_k2(const BoundParams& bp) {
  const double shift = bp.a - std::abs(bp.a) / std::numbers::sqrt2;
  return bp.l_sigma * bp.l_sigma * bp.C * bp.C * std::sqrt(std::numbers::pi) * std::exp(shift * shift);
}

/// Upsilon^{-1}(1/K^2): lower reference for the second-moment exponent.
inline double lower_lyapunov_bound(const LevyExponent& exp, const BoundParams& bp) {
  bp.validate();
  const double k2 = lower_bound_k2(bp);
  if (!(k2 > 0.0)) throw DomainError("lower bound needs K^2 > 0 (L_sigma > 0 and C > 0)");
  return upsilon_inverse(exp, 1.0 / k2);
}

/// Growth rate (Gamma(rho))^{1/rho} kappa^{1/rho} of the renewal inequality.
inline double renewal_growth_rate(double rho, double kappa) {
  if (!(rho > 0.0)) throw DomainError("renewal rate needs rho > 0");
  if (!(kappa >= 0.0)) throw DomainError("renewal rate needs kappa >= 0");
  if (kappa == 0.0) return 0.0;
  return std::pow(std::tgamma(rho), 1.0 / rho) * std::pow(kappa, 1.0 / rho);
}

/// kappa = c z_p^2 Lip^2 (p/(p-1))^2 exp(lambda0^2 t0 (p-1)).
inline double stable_growth_kappa(const BoundParams& bp) {
  const double q = moment_constant(bp) * bp.lip_sigma;
  return bp.kernel_constant * q * q;
}

/// Exponent coefficient for the alpha-stable p-th moment: renewal rate with
/// rho = (alpha - 1)/alpha; scales as (p/(p-1))^{2 alpha/(alpha-1)}.
inline double stable_growth_rate(double alpha, double kappa) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw DomainError("stable growth rate needs alpha in (1, 2], got " + std::to_string(alpha));
  return renewal_growth_rate((alpha - 1.0) / alpha, kappa);
}

inline double stable_growth_rate(double alpha, const BoundParams& bp) {
  bp.validate();
  return stable_growth_rate(alpha, stable_growth_kappa(bp));
}

}  // namespace shelab
