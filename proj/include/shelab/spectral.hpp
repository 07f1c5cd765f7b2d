#pragma once

// Periodic grid on [-L, L) and an FFTW-backed real transform that applies
// diagonal Fourier multipliers.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "shelab/errors.hpp"

namespace shelab {

/// N equispaced points x_j = -L + j dx, dx = 2L/N, with periodic wrap.
/// Frequencies are xi_k = pi k / L.
struct GridSpec {
  double half_width = 1.0;
  std::size_t n_points = 8;

  void validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
      throw DomainError("grid half_width must be finite and > 0");
    if (n_points < 8 || !std::has_single_bit(n_points))
      throw DomainError("grid n_points must be a power of two >= 8, got " + std::to_string(n_points));
  }

  double dx() const { return 2.0 * half_width / static_cast<double>(n_points); }
  double x(std::size_t j) const { return -half_width + static_cast<double>(j) * dx(); }
  /// Index of x = 0.
  std::size_t center() const { return n_points / 2; }
  /// Number of non-redundant coefficients of a real transform.
  std::size_t n_modes() const { return n_points / 2 + 1; }
  /// |xi_k| for half-spectrum index k in [0, N/2].
  double frequency(std::size_t k) const { return std::numbers::pi * static_cast<double>(k) / half_width; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// A real function sampled on a GridSpec.
struct GridFunction {
  GridSpec grid;
  std::vector<double> values;

  static GridFunction constant(const GridSpec& grid, double c) {
    return {grid, std::vector<double>(grid.n_points, c)};
  }

  template <class F>
  static GridFunction sample(const GridSpec& grid, F&& f) {
    GridFunction g{grid, std::vector<double>(grid.n_points)};
    for (std::size_t j = 0; j < grid.n_points; ++j) g.values[j] = f(grid.x(j));
    return g;
  }
};

namespace detail {
// FFTW's planner is not thread-safe; plan execution is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Owns r2c/c2r plans and aligned buffers for one grid size. Not shareable
/// between threads; give each worker its own instance.
class SpectralTransform {
 public:
  explicit SpectralTransform(const GridSpec& grid) : n_(grid.n_points) {
    grid.validate();
    real_ = fftw_alloc_real(n_);
    spec_ = fftw_alloc_complex(n_ / 2 + 1);
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), spec_, real_, FFTW_ESTIMATE);
  }

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  SpectralTransform(SpectralTransform&& o) noexcept
      : n_(o.n_), real_(std::exchange(o.real_, nullptr)), spec_(std::exchange(o.spec_, nullptr)),
        forward_(std::exchange(o.forward_, nullptr)), backward_(std::exchange(o.backward_, nullptr)) {}

  ~SpectralTransform() {
    if (forward_ || backward_) {
      std::lock_guard lock(detail::fftw_planner_mutex());
      if (forward_) fftw_destroy_plan(forward_);
      if (backward_) fftw_destroy_plan(backward_);
    }
    if (real_) fftw_free(real_);
    if (spec_) fftw_free(spec_);
  }

  std::size_t size() const noexcept { return n_; }

  /// u <- IDFT(m_k * DFT(u)) for a real, even multiplier given on k = 0..N/2.
  void apply_multiplier(std::span<double> u, std::span<const double> multiplier) {
    std::copy(u.begin(), u.end(), real_);
    fftw_execute(forward_);
    const std::size_t modes = n_ / 2 + 1;
    for (std::size_t k = 0; k < modes; ++k) {
      spec_[k][0] *= multiplier[k];
      spec_[k][1] *= multiplier[k];
    }
    fftw_execute(backward_);
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) u[j] = real_[j] * inv_n;
  }

  /// Real signal from half-spectrum coefficients (unnormalized c2r).
  void synthesize(std::span<const std::complex<double>> coeffs, std::span<double> out) {
    const std::size_t modes = n_ / 2 + 1;
    for (std::size_t k = 0; k < modes; ++k) {
      spec_[k][0] = coeffs[k].real();
      spec_[k][1] = coeffs[k].imag();
    }
    fftw_execute(backward_);
    std::copy(real_, real_ + n_, out.begin());
  }

 private:
  std::size_t n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

/// Multiplier exp(-t |xi_k|^alpha) on the half spectrum.
inline std::vector<double> heat_multiplier(const GridSpec& grid, double alpha, double t) {
  std::vector<double> m(grid.n_modes());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double xi = grid.frequency(k);
    const double sym = alpha == 2.0 ? xi * xi : std::pow(xi, alpha);
    m[k] = std::exp(-t * sym);
  }
  return m;
}

}  // namespace shelab
