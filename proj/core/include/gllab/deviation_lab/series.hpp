#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gllab/common/monte_carlo.hpp"
#include "gllab/common/stats.hpp"
#include "gllab/matrix_walk/measure.hpp"

namespace gllab {

struct SeriesRow {
  std::size_t n = 0;
  double threshold = 0.0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  Interval ci{0.0, 0.0};
  double term = 0.0;
  /// Trapezoidal contribution of the integers in (previous n, n].
  double increment = 0.0;
  double partial_sum = 0.0;
  double partial_lo = 0.0;
  double partial_hi = 0.0;
};

struct SeriesReport {
  std::vector<SeriesRow> rows;
  /// Increments non-increasing over the last half of the schedule.
  bool increments_decreasing = false;
  std::string verdict;
  std::vector<std::string> warnings;
};

/// Partial sums of n^{alpha p - 2} sup_x P(max_k |...| > n^alpha y).
/// alpha < 1/p, and the excluded pair p = 2, alpha = 1/2, produce warnings.
SeriesReport baum_katz_partial(const MeasureSpec& spec, double lambda, double alpha, double p,
                               double y, const std::vector<std::size_t>& n_schedule,
                               std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc);

/// Partial sums of (1/n) sup_x P(max_k |...| > y sqrt(2 n log log n)).
SeriesReport lil_curve(const MeasureSpec& spec, double lambda, double v,
                       const std::vector<std::size_t>& n_schedule, double y,
                       std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc);

}  // namespace gllab
