#pragma once

// Exponential martingales M_t^lambda = exp(lambda B_t - lambda^2 t / 2), the
// probabilists' Hermite polynomials that expand them, and the Gaussian
// mixture of M_t^lambda used as the multiplicative noise factor.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "shelab/errors.hpp"
#include "shelab/quadrature.hpp"

namespace shelab {

/// h_n(x) via h_{n+1} = x h_n - n h_{n-1}, h_0 = 1, h_1 = x.
inline double hermite(int n, double x) {
  if (n < 0) throw DomainError("hermite degree must be >= 0, got " + std::to_string(n));
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// H_n(b, t) = t^{n/2} h_n(b / sqrt t), computed with the scaled recursion
/// H_{n+1} = b H_n - n t H_{n-1}; at t = 0 this gives b^n.
inline double space_time_hermite(int n, double b, double t) {
  if (n < 0) throw DomainError("hermite degree must be >= 0, got " + std::to_string(n));
  if (!(t >= 0.0)) throw DomainError("space-time hermite needs t >= 0");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = b;
  for (int k = 1; k < n; ++k) {
    const double next = b * cur - k * t * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Table of h_0..h_N at one point.
struct HermiteBasis {
  int max_degree = 0;

  std::vector<double> values(double x) const {
    if (max_degree < 0) throw DomainError("hermite basis degree must be >= 0");
    std::vector<double> h(static_cast<std::size_t>(max_degree) + 1);
    h[0] = 1.0;
    if (max_degree >= 1) h[1] = x;
    for (int k = 1; k < max_degree; ++k) h[k + 1] = x * h[k] - k * h[k - 1];
    return h;
  }
};

inline double exp_martingale(double lambda, double b, double t) {
  if (!(t >= 0.0)) throw DomainError("exponential martingale needs t >= 0");
  return std::exp(lambda * b - 0.5 * lambda * lambda * t);
}

struct ExponentialMartingale {
  double lambda = 0.0;
  double operator()(double b, double t) const { return exp_martingale(lambda, b, t); }
};

/// Partial sum sum_{n < n_terms} lambda^n / n! H_n(b, t).
inline double martingale_series(double lambda, double b, double t, int n_terms) {
  if (n_terms < 1) throw DomainError("martingale series needs n_terms >= 1");
  if (!(t >= 0.0)) throw DomainError("martingale series needs t >= 0");
  double sum = 1.0;
  double coef = 1.0;  // lambda^n / n!
  double prev = 1.0, cur = b;
  for (int n = 1; n < n_terms; ++n) {
    coef *= lambda / n;
    sum += coef * cur;
    const double next = b * cur - n * t * prev;
    prev = cur;
    cur = next;
  }
  return sum;
}

/// f(b, t) = Int M_t^lambda C exp(-lambda^2/2) d lambda
///         = C sqrt(2 pi / (1 + t)) exp(b^2 / (2 (1 + t))).
inline double harmonic_mixture_value(double C, double b, double t) {
  if (!(C > 0.0)) throw DomainError("mixture constant C must be > 0");
  if (!(t >= 0.0)) throw DomainError("harmonic mixture needs t >= 0");
  return C * std::sqrt(2.0 * std::numbers::pi / (1.0 + t)) * std::exp(b * b / (2.0 * (1.0 + t)));
}

/// Same integral by adaptive quadrature over lambda in [-window, window].
inline double harmonic_mixture_quadrature(double C, double b, double t, double window = 12.0) {
  if (!(C > 0.0)) throw DomainError("mixture constant C must be > 0");
  if (!(t >= 0.0)) throw DomainError("harmonic mixture needs t >= 0");
  auto f = [&](double lam) { return C * std::exp(lam * b - 0.5 * lam * lam * (1.0 + t)); };
  const double peak = b / (1.0 + t);
  return quad::integrate(f, -window, peak) + quad::integrate(f, peak, window);
}

struct HarmonicMixture {
  double C = 1.0;
  double operator()(double b, double t) const { return harmonic_mixture_value(C, b, t); }
};

/// exp(lambda a - lambda^2 t_a / 2): the martingale frozen at the hitting time of level a.
inline double hitting_limit_value(double lambda, double a, double t_a) {
  if (!(t_a >= 0.0)) throw DomainError("hitting time must be >= 0");
  return std::exp(lambda * a - 0.5 * lambda * lambda * t_a);
}

/// Mixture value with (B, t) frozen at (a, T_a).
inline double frozen_mixture_value(double C, double a, double t_a) {
  return harmonic_mixture_value(C, a, t_a);
}

}  // namespace shelab
