#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "shelab/brownian.hpp"

using namespace shelab;

TEST(Path, ReproducibleWithGaussianIncrements) {
  const auto a = sample_path(1.0, 1e-3, 9);
  const auto b = sample_path(1.0, 1e-3, 9);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.n_steps, 1000u);
  EXPECT_EQ(a.values.front(), 0.0);
  EXPECT_DOUBLE_EQ(a.horizon(), 1.0);
  const auto c = sample_path(50.0, 1e-3, 10);
  double s2 = 0;
  for (std::size_t k = 0; k < c.n_steps; ++k) s2 += std::pow(c.values[k + 1] - c.values[k], 2);
  EXPECT_NEAR(s2 / c.n_steps / 1e-3, 1.0, 5.0 * std::sqrt(2.0 / c.n_steps));
  EXPECT_THROW(sample_path(1.0, 2.0, 1), DomainError);
  EXPECT_THROW(sample_path(0.0, 0.1, 1), DomainError);
}

TEST(Path, RunningSupremum) {
  const std::vector<double> v{0.0, 0.5, -0.2, 0.9, 0.1};
  EXPECT_EQ(running_sup(v), (std::vector<double>{0.0, 0.5, 0.5, 0.9, 0.9}));
}

TEST(Hitting, GridCrossingsWithoutBridge) {
  const std::vector<double> v{0.0, 0.5, 1.2, 0.3};
  RandomSource rng(1);
  auto r = first_hitting(v, 0.1, 1.0, false, rng);
  ASSERT_TRUE(r.hit_index);
  EXPECT_EQ(*r.hit_index, 2u);
  EXPECT_DOUBLE_EQ(*r.hit_time, 0.2);
  EXPECT_FALSE(first_hitting(v, 0.1, 2.0, false, rng).hit_time);
  const std::vector<double> w{0.0, -0.4, -1.1};
  EXPECT_EQ(*first_hitting(w, 0.1, -1.0, false, rng).hit_index, 2u);
  EXPECT_EQ(*first_hitting(v, 0.1, 0.0, false, rng).hit_time, 0.0);
}

TEST(Hitting, BlockSkippingMatchesMaterializedPaths) {
  // P[T_a <= H] for the two simulation routes and the reflection formula 2 Phi(-a / sqrt H).
  const double a = 1.0, H = 2.0, dt = 1e-3;
  const std::size_t n = 20000, steps = steps_for(H, dt);
  std::size_t direct = 0, skip = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (first_hitting(sample_path(H, dt, derive_seed(4, i)), a, true).hit_time) ++direct;
    RandomSource rng(derive_seed(5, i));
    if (simulate_hitting_index(a, dt, steps, true, rng)) ++skip;
  }
  const double exact = 2.0 * stats::normal_cdf(-a / std::sqrt(H));
  const double se = std::sqrt(exact * (1 - exact) / n);
  EXPECT_NEAR(static_cast<double>(direct) / n, exact, 4.0 * se);
  EXPECT_NEAR(static_cast<double>(skip) / n, exact, 4.0 * se);
}

TEST(Hitting, BridgeCorrectionRemovesGridBias) {
  // On a coarse grid the uncorrected estimator misses crossings; the corrected one does not.
  const double a = 1.0, H = 1.0, dt = 0.02;
  const std::size_t n = 40000, steps = steps_for(H, dt);
  std::size_t raw = 0, corrected = 0;
  for (std::size_t i = 0; i < n; ++i) {
    RandomSource r1(derive_seed(6, i)), r2(derive_seed(6, i));
    if (simulate_hitting_index(a, dt, steps, false, r1)) ++raw;
    if (simulate_hitting_index(a, dt, steps, true, r2)) ++corrected;
  }
  const double exact = 2.0 * stats::normal_cdf(-a / std::sqrt(H));
  const double se = std::sqrt(exact * (1 - exact) / n);
  EXPECT_LT(static_cast<double>(raw) / n, exact - 4.0 * se);
  EXPECT_NEAR(static_cast<double>(corrected) / n, exact, 4.0 * se);
}

TEST(Hitting, LaplaceTransformSmall) {
  const auto rep = hitting_laplace_check(1.0, 2.0, 20000, 1e-3, 8.0, 21);
  EXPECT_TRUE(rep.within_tolerance()) << rep.empirical << " vs " << rep.exact << " +/- " << rep.tolerance();
  EXPECT_LT(rep.bracket_width, 1e-6);
  const auto again = hitting_laplace_check(1.0, 2.0, 20000, 1e-3, 8.0, 21, 3);
  EXPECT_EQ(rep.empirical, again.empirical);
  EXPECT_THROW(hitting_laplace_check(1.0, 0.5, 100, 1e-3, 2.0, 1), ConfigError);
  EXPECT_THROW(hitting_laplace_check(1.0, 0.0, 100, 1e-3, 2.0, 1), DomainError);
}

TEST(Doob, SidesFromSyntheticSamples) {
  const std::vector<double> s{1.0, 2.0, 3.0};
  const auto rep = doob_sides(s, s, 2.0);
  EXPECT_DOUBLE_EQ(rep.constant, 4.0);
  EXPECT_NEAR(rep.rhs, 4.0 * rep.lhs, 1e-14);
  EXPECT_THROW(doob_sides(s, s, 1.0), DomainError);
}

TEST(Doob, InequalityHoldsOnPaths) {
  for (double p : {2.0, 4.0}) {
    const auto rep = doob_check(p, 4000, 1.0, 1e-3, 31);
    EXPECT_TRUE(rep.holds());
    EXPECT_LT(rep.lhs, rep.rhs);
    // E sup |B|^2 over [0, 1] lies between E B_1^2 = 1 and 4.
    if (p == 2.0) {
      EXPECT_GT(rep.lhs, 1.0);
    }
  }
}

TEST(SupTail, ReflectionAndExponentialBound) {
  const auto rep = sup_tail_check(1.0, 1.0, 20000, 1e-3, 41);
  EXPECT_TRUE(rep.matches_exact()) << rep.empirical << " vs " << rep.exact;
  EXPECT_TRUE(rep.below_bound());
  EXPECT_NEAR(rep.bound, std::exp(-0.5), 1e-15);
}

TEST(SupTail, DriftInfimumByGridSearch) {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double t : {1.0, 3.0}) {
      double best = 1e300, arg = 0;
      for (double lam = 0.0; lam <= 5.0; lam += 1e-4) {
        const double v = -lam * a * t + lam * lam * t / 2.0;
        if (v < best) {
          best = v;
          arg = lam;
        }
      }
      const auto d = drift_infimum(a, t);
      EXPECT_NEAR(d.value, best, 1e-7);
      EXPECT_NEAR(d.argmin, arg, 2e-4);
    }
  }
}

TEST(SupTail, SupremumMartingaleDominates) {
  for (std::uint64_t s = 0; s < 50; ++s) EXPECT_TRUE(sup_martingale_dominates(sample_path(1.0, 1e-2, s), 1.3));
}

TEST(Restart, IncrementsAfterHittingAreBrownian) {
  const auto rep = markov_restart_check(0.5, 0.5, 4000, 1e-3, 2.0, 51);
  ASSERT_GT(rep.n_hit, 1000u);
  EXPECT_NEAR(rep.mean, 0.0, 3.0 * rep.mean_se);
  EXPECT_NEAR(rep.variance, rep.lag, 3.0 * rep.variance_se);
}
