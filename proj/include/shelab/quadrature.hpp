#pragma once

// Thin wrappers over Boost.Math quadrature with the tolerances used across
// the library.

#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace shelab::quad {

inline constexpr double kDefaultRelTol = 1e-12;

/// Adaptive 61-point Gauss-Kronrod on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = kDefaultRelTol,
                 unsigned max_depth = 15) {
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, b, max_depth, rel_tol, &err);
}

/// Tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
template <class F>
double integrate_singular(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  return integrator.integrate(f, a, b, rel_tol);
}

/// Exp-sinh on [a, inf); for integrands decaying at infinity.
template <class F>
double integrate_to_infinity(F&& f, double a, double rel_tol = 1e-12) {
  static thread_local boost::math::quadrature::exp_sinh<double> integrator(12);
  return integrator.integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol);
}

}  // namespace shelab::quad
