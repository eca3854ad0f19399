#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gllab/common/monte_carlo.hpp"
#include "gllab/common/stats.hpp"
#include "gllab/matrix_walk/measure.hpp"

namespace gllab {

/// Estimates of sup_x P(max_{k<=n} |log|A_k x| - k lambda| > n^alpha y),
/// the sup taken over a finite direction grid (a lower bound on the true sup).
struct TailCurve {
  std::size_t n = 0;
  double alpha = 1.0;
  double lambda = 0.0;
  std::vector<double> y_grid;
  /// Threshold actually used for each y (n^alpha y unless built otherwise).
  std::vector<double> thresholds;
  std::vector<std::size_t> hits;
  std::vector<double> p_hat;
  std::vector<Interval> ci;
  /// p_hat = 0: the interval is the one-sided [0, 3/reps].
  std::vector<bool> censored;
  std::size_t x_grid_size = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

/// Builds the curve from counts; throws InvariantError if p_hat increases
/// along increasing thresholds.
TailCurve make_tail_curve(std::size_t n, double alpha, double lambda, std::vector<double> y_grid,
                          std::vector<double> thresholds, std::vector<std::size_t> hits,
                          std::size_t x_grid_size, std::size_t reps, std::uint64_t seed);

/// Requires alpha in (1/2, 1], reps >= 100 and a strictly increasing y grid
/// of positive values.
TailCurve tail_estimate(const MeasureSpec& spec, double lambda, std::size_t n, double alpha,
                        const std::vector<double>& y_grid, std::size_t x_grid_size,
                        std::size_t reps, const MonteCarlo& mc);

/// The same estimate for every horizon of a schedule, from one pass.
std::vector<TailCurve> tail_schedule(const MeasureSpec& spec, double lambda,
                                     const std::vector<std::size_t>& n_schedule, double alpha,
                                     const std::vector<double>& y_grid, std::size_t x_grid_size,
                                     std::size_t reps, const MonteCarlo& mc);

/// Curves centred at lambda - 2 se, lambda and lambda + 2 se.
struct TailSensitivity {
  TailCurve low;
  TailCurve central;
  TailCurve high;
};

TailSensitivity tail_sensitivity(const MeasureSpec& spec, double lambda_hat, double std_error,
                                 std::size_t n, double alpha, const std::vector<double>& y_grid,
                                 std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc);

/// Powers of two in [n_min, n_max].
std::vector<std::size_t> dyadic_schedule(std::size_t n_min, std::size_t n_max);

}  // namespace gllab
