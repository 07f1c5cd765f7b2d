#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "shelab/errors.hpp"

namespace shelab::stats {

/// Pairwise (cascade) summation in a fixed order; the result depends only on
/// the sequence, never on how it was produced.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 32;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw DomainError("mean of empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Sample mean with its jackknife standard error.
///
/// For the mean the leave-one-out estimates are (S - x_i)/(n - 1); the
/// jackknife variance is (n-1)/n * sum (m_i - mbar)^2.
inline MeanEstimate jackknife_mean(std::span<const double> xs) {
  MeanEstimate out;
  out.n = xs.size();
  if (xs.empty()) throw DomainError("jackknife of empty sample");
  const double n = static_cast<double>(xs.size());
  out.mean = pairwise_sum(xs) / n;
  if (xs.size() < 2) return out;
  // Deviations are taken around xs[0] so a constant sample gives exactly 0.
  std::vector<double> shifted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) shifted[i] = xs[i] - xs[0];
  const double shift_mean = pairwise_sum(shifted) / n;
  std::vector<double> dev2(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = (shift_mean - shifted[i]) / (n - 1.0);  // leave-one-out mean minus mean
    dev2[i] = d * d;
  }
  out.std_error = std::sqrt((n - 1.0) / n * pairwise_sum(dev2));
  return out;
}

/// Mean and standard error of a Bernoulli sample given the count of successes.
inline MeanEstimate binomial_estimate(std::size_t successes, std::size_t n) {
  if (n == 0) throw DomainError("binomial estimate with n = 0");
  MeanEstimate out;
  out.n = n;
  out.mean = static_cast<double>(successes) / static_cast<double>(n);
  out.std_error = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(n));
  return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace shelab::stats
