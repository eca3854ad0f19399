#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gllab {

struct Interval {
  double lo;
  double hi;
};

/// 95% Wilson score interval for `hits` successes in `trials`. A zero count
/// gets the one-sided rule-of-three bound [0, 3/trials].
Interval wilson_interval(std::size_t hits, std::size_t trials, double z = 1.959963984540054);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Sample mean and standard error of the mean.
MeanEstimate mean_estimate(std::span<const double> values);

/// Batch-means standard error for a single correlated series.
MeanEstimate batch_means(std::span<const double> series, std::size_t batches);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares of ys on xs; requires at least two distinct xs.
LinearFit least_squares(std::span<const double> xs, std::span<const double> ys);

/// Kolmogorov-Smirnov distance between the empirical law of `samples` and
/// the uniform law on [lo, hi).
double ks_uniform_statistic(std::vector<double> samples, double lo, double hi);

/// Asymptotic 5% critical value of the one-sample KS statistic.
double ks_critical_5pct(std::size_t n);

}  // namespace gllab
