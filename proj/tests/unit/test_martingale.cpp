#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "shelab/brownian.hpp"
#include "shelab/martingale.hpp"

using namespace shelab;

TEST(Hermite, LowDegreeClosedForms) {
  for (double x : {-2.5, -0.3, 0.0, 1.0, 4.2}) {
    EXPECT_DOUBLE_EQ(hermite(0, x), 1.0);
    EXPECT_DOUBLE_EQ(hermite(1, x), x);
    EXPECT_NEAR(hermite(2, x), x * x - 1.0, 1e-12);
    EXPECT_NEAR(hermite(3, x), x * x * x - 3.0 * x, 1e-12);
    EXPECT_NEAR(hermite(4, x), std::pow(x, 4) - 6.0 * x * x + 3.0, 1e-11);
    EXPECT_NEAR(hermite(5, x), std::pow(x, 5) - 10.0 * std::pow(x, 3) + 15.0 * x, 1e-10);
  }
  EXPECT_THROW(hermite(-1, 0.0), DomainError);
}

TEST(Hermite, DerivativeIdentity) {
  // h_n' = n h_{n-1}, derivative by a five-point stencil.
  const double h = 1e-3;
  for (int n = 1; n <= 10; ++n) {
    for (double x = -5.0; x <= 5.0; x += 0.25) {
      const double d = (-hermite(n, x + 2 * h) + 8 * hermite(n, x + h) - 8 * hermite(n, x - h) + hermite(n, x - 2 * h)) /
                       (12 * h);
      const double expect = n * hermite(n - 1, x);
      EXPECT_NEAR(d, expect, 1e-6 * std::max(1.0, std::abs(expect))) << "n = " << n << " x = " << x;
    }
  }
}

TEST(Hermite, BasisTableMatchesScalar) {
  const auto tab = HermiteBasis{12}.values(1.3);
  ASSERT_EQ(tab.size(), 13u);
  for (int n = 0; n <= 12; ++n) EXPECT_DOUBLE_EQ(tab[n], hermite(n, 1.3));
}

TEST(Hermite, SpaceTimeScaling) {
  for (int n = 0; n <= 8; ++n) {
    EXPECT_NEAR(space_time_hermite(n, 1.7, 0.0), std::pow(1.7, n), 1e-12 * std::pow(1.7, n));
    for (double t : {0.3, 2.0}) {
      const double b = -0.8;
      EXPECT_NEAR(space_time_hermite(n, b, t), std::pow(t, n / 2.0) * hermite(n, b / std::sqrt(t)), 1e-11);
    }
  }
  EXPECT_THROW(space_time_hermite(2, 0.0, -1.0), DomainError);
}

TEST(Martingale, SeriesReproducesExponential) {
  for (double lambda = -1.0; lambda <= 1.0; lambda += 0.25)
    for (double b = -2.0; b <= 2.0; b += 0.5)
      for (double t : {0.0, 0.5, 1.0, 2.0})
        EXPECT_NEAR(martingale_series(lambda, b, t, 30), exp_martingale(lambda, b, t), 1e-8)
            << lambda << " " << b << " " << t;
  EXPECT_DOUBLE_EQ(exp_martingale(0.0, 3.0, 5.0), 1.0);
  EXPECT_THROW(martingale_series(1.0, 0.0, 1.0, 0), DomainError);
}

TEST(Martingale, HarmonicMixtureClosedFormAndQuadrature) {
  EXPECT_NEAR(harmonic_mixture_value(1.0, 0.0, 0.0), std::sqrt(2.0 * std::numbers::pi), 1e-15);
  // Independent oracle: trapezoid rule over lambda (spectrally accurate for Gaussians).
  for (double b : {-1.5, 0.0, 0.4, 2.0}) {
    for (double t : {0.0, 0.5, 3.0}) {
      const double h = 0.01;
      double s = 0.0;
      for (int i = -2000; i <= 2000; ++i) {
        const double lam = i * h;
        s += 0.7 * std::exp(lam * b - 0.5 * lam * lam * (1.0 + t));
      }
      s *= h;
      EXPECT_NEAR(harmonic_mixture_value(0.7, b, t) / s, 1.0, 1e-12);
      EXPECT_NEAR(harmonic_mixture_quadrature(0.7, b, t) / s, 1.0, 1e-10);
    }
  }
  EXPECT_THROW(harmonic_mixture_value(0.0, 0.0, 0.0), DomainError);
}

TEST(Martingale, FrozenValues) {
  EXPECT_DOUBLE_EQ(hitting_limit_value(0.7, 0.0, 0.0), 1.0);
  EXPECT_NEAR(hitting_limit_value(1.0, 1.0, 2.0), 1.0, 1e-15);
  EXPECT_NEAR(frozen_mixture_value(1.0, 0.0, 0.0), std::sqrt(2.0 * std::numbers::pi), 1e-15);
}

TEST(Martingale, MonteCarloMeanIsOne) {
  for (double lambda : {0.5, 1.0}) {
    const auto est = martingale_mean_check(lambda, 1.0, 100000, 17);
    EXPECT_NEAR(est.mean, 1.0, 3.0 * est.std_error) << "lambda = " << lambda;
  }
  const auto a = martingale_mean_check(1.0, 1.0, 5000, 3, 1);
  const auto b = martingale_mean_check(1.0, 1.0, 5000, 3, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}
