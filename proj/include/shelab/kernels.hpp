#pragma once

// Transition densities of the symmetric alpha-stable semigroup with Fourier
// symbol exp(-t |xi|^alpha) (alpha = 2 is the heat kernel of the Laplacian,
// p(t, x) = (4 pi t)^{-1/2} exp(-x^2 / 4t)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "shelab/errors.hpp"
#include "shelab/quadrature.hpp"
#include "shelab/spectral.hpp"

namespace shelab {

inline void require_stable_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw DomainError("alpha must lie in (1, 2], got " + std::to_string(alpha));
}

/// Generator -(-Delta)^{alpha/2}; alpha = 2 is the Laplacian.
struct HeatKernel {
  double alpha = 2.0;

  double symbol(double xi) const {
    const double a = std::abs(xi);
    return alpha == 2.0 ? a * a : std::pow(a, alpha);
  }
};

inline double gaussian_kernel(double t, double x) {
  if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0");
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// p(t, 0) = Gamma(1 + 1/alpha) / (pi t^{1/alpha}).
inline double diagonal_density(double alpha, double t) {
  require_stable_alpha(alpha);
  if (!(t > 0.0)) throw DomainError("diagonal density needs t > 0");
  return std::tgamma(1.0 + 1.0 / alpha) / (std::numbers::pi * std::pow(t, 1.0 / alpha));
}

/// p(t, x) by direct Fourier inversion (1/pi) Int_0^inf exp(-t xi^alpha) cos(xi x) d xi,
/// evaluated at t = 1 and rescaled with p(t, x) = t^{-1/alpha} p(1, t^{-1/alpha} x).
/// Used for every alpha, including 2, so it can serve as an independent check.
inline double fourier_density(double alpha, double t, double x) {
  require_stable_alpha(alpha);
  if (!(t > 0.0)) throw DomainError("stable density needs t > 0");
  const double scale = std::pow(t, -1.0 / alpha);
  const double y = std::abs(x) * scale;
  const double cutoff = std::pow(46.0, 1.0 / alpha);  // exp(-xi^alpha) < 1e-20 beyond
  const double piece = y > std::numbers::pi ? std::numbers::pi / y : 1.0;
  const auto n_pieces = static_cast<std::size_t>(std::ceil(cutoff / piece));
  auto f = [&](double xi) { return std::exp(-std::pow(xi, alpha)) * std::cos(xi * y); };
  double sum = 0.0;
  for (std::size_t i = 0; i < n_pieces; ++i) {
    const double a = piece * static_cast<double>(i);
    const double b = std::min(cutoff, a + piece);
    sum += quad::integrate(f, a, b, 1e-12, 10);
  }
  return scale * sum / std::numbers::pi;
}

/// Closed form for alpha = 2, Fourier inversion otherwise.
inline double stable_density(double alpha, double t, double x) {
  require_stable_alpha(alpha);
  return alpha == 2.0 ? gaussian_kernel(t, x) : fourier_density(alpha, t, x);
}

/// Estimate of the kernel mass outside [-L, L]: Gaussian tail for alpha = 2,
/// otherwise the larger of a Gaussian-core tail and the power-law tail
/// 2 C_alpha t L^{-alpha} / alpha, C_alpha = Gamma(1+alpha) sin(pi alpha/2) / pi.
inline double kernel_tail_mass(double alpha, double t, double L) {
  require_stable_alpha(alpha);
  const double core = std::erfc(L / (2.0 * std::pow(t, 1.0 / alpha)));
  if (alpha == 2.0) return core;
  const double c_alpha = std::tgamma(1.0 + alpha) * std::sin(std::numbers::pi * alpha / 2.0) / std::numbers::pi;
  return std::max(core, 2.0 * c_alpha * t * std::pow(L, -alpha) / alpha);
}

struct KernelSample {
  GridFunction density;
  /// Total mass of negative synthesis noise that was clamped to zero.
  double clamped_mass = 0.0;
  /// Estimated mass of the free-space kernel outside the periodic cell.
  double truncation_mass = 0.0;
};

/// Grid samples of p(t, x_j) via inverse DFT of exp(-t |xi_k|^alpha).
///
/// Throws GridTooSmallError when the estimated mass outside [-L, L] exceeds
/// `max_truncation_mass`, and DomainError when synthesis produces a value
/// below -1e-10 (grid too coarse for t).
inline KernelSample stable_kernel(double alpha, double t, const GridSpec& grid,
                                  double max_truncation_mass = 1e-6) {
  require_stable_alpha(alpha);
  grid.validate();
  if (!(t > 0.0)) throw DomainError("stable kernel needs t > 0");
  KernelSample out;
  out.truncation_mass = kernel_tail_mass(alpha, t, grid.half_width);
  if (out.truncation_mass > max_truncation_mass)
    throw GridTooSmallError("kernel mass outside [-L, L] ~ " + std::to_string(out.truncation_mass) +
                            " exceeds " + std::to_string(max_truncation_mass) + " (alpha = " +
                            std::to_string(alpha) + ", t = " + std::to_string(t) +
                            ", L = " + std::to_string(grid.half_width) + ")");
  const auto mult = heat_multiplier(grid, alpha, t);
  // x_0 = -L shifts mode k by exp(-i pi k) = (-1)^k.
  std::vector<std::complex<double>> coeffs(grid.n_modes());
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = (k % 2 == 0 ? 1.0 : -1.0) * mult[k];
  out.density.grid = grid;
  out.density.values.resize(grid.n_points);
  SpectralTransform fft(grid);
  fft.synthesize(coeffs, out.density.values);
  const double inv_len = 1.0 / (2.0 * grid.half_width);
  for (auto& v : out.density.values) {
    v *= inv_len;
    if (v < 0.0) {
      if (v < -1e-10)
        throw DomainError("stable kernel synthesis went negative (" + std::to_string(v) +
                          "); grid too coarse for t = " + std::to_string(t));
      out.clamped_mass += -v * grid.dx();
      v = 0.0;
    }
  }
  return out;
}

/// Entry (t, x, ratio) of a two-sided kernel estimate sweep.
struct KernelRatio {
  double t;
  double x;
  double ratio;
};

struct KernelBoundReport {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  /// Smallest c with every ratio in [1/c, c].
  double c = 0.0;
  std::vector<KernelRatio> ratios;
};

/// Reference profile t^{-1/alpha} min t / |x|^{1+alpha}.
inline double stable_envelope(double alpha, double t, double x) {
  const double near = std::pow(t, -1.0 / alpha);
  const double ax = std::abs(x);
  if (ax == 0.0) return near;
  return std::min(near, t / std::pow(ax, 1.0 + alpha));
}

/// Ratios p(t, x) / envelope(t, x) over the product set.
inline KernelBoundReport kernel_bound_check(double alpha, const std::vector<double>& t_set,
                                            const std::vector<double>& x_set) {
  require_stable_alpha(alpha);
  KernelBoundReport rep;
  rep.ratios.reserve(t_set.size() * x_set.size());
  for (double t : t_set) {
    for (double x : x_set) {
      const double r = stable_density(alpha, t, x) / stable_envelope(alpha, t, x);
      rep.ratios.push_back({t, x, r});
      rep.min_ratio = std::min(rep.min_ratio, r);
      rep.max_ratio = std::max(rep.max_ratio, r);
    }
  }
  if (!rep.ratios.empty()) rep.c = std::max(rep.max_ratio, 1.0 / rep.min_ratio);
  return rep;
}

/// (P_t u0) on the periodic grid via the spectral multiplier; t = 0 is the identity.
inline GridFunction semigroup_apply(const HeatKernel& kernel, const GridFunction& u0, double t) {
  if (!(t >= 0.0)) throw DomainError("semigroup needs t >= 0");
  u0.grid.validate();
  GridFunction out = u0;
  if (t == 0.0) return out;
  SpectralTransform fft(u0.grid);
  fft.apply_multiplier(out.values, heat_multiplier(u0.grid, kernel.alpha, t));
  return out;
}

/// Int p(t, x, y)^2 dy by grid quadrature of the sampled kernel; equals p(2t, 0).
inline double on_diagonal_l2(const HeatKernel& kernel, double t, const GridSpec& grid,
                             double max_truncation_mass = 1e-6) {
  if (!(t > 0.0)) throw DomainError("on_diagonal_l2 needs t > 0");
  const auto k = stable_kernel(kernel.alpha, t, grid, max_truncation_mass);
  double s = 0.0;
  for (double v : k.density.values) s += v * v;
  return s * grid.dx();
}

}  // namespace shelab
