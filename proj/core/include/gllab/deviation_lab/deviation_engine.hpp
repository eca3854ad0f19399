#pragma once

#include <cstddef>
#include <vector>

#include "gllab/common/monte_carlo.hpp"
#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/projective_point.hpp"

namespace gllab {

/// What one pass over trajectories should count.
struct ExceedancePlan {
  /// Start directions; replicate r uses stream r from every start.
  std::vector<ProjectivePoint> starts;
  /// Horizons n_j, strictly increasing.
  std::vector<std::size_t> checkpoints;
  /// thresholds[j] (strictly increasing) applies at checkpoints[j].
  std::vector<std::vector<double>> thresholds;
  std::size_t reps = 0;
};

/// hits[s][j][t] = #{r : max_{k<=n_j} |log|A_k x_s| - k lambda| > thresholds[j][t]}.
struct ExceedanceCounts {
  std::size_t reps = 0;
  std::vector<std::vector<std::vector<std::size_t>>> hits;

  /// Largest count over starts and the start attaining it.
  std::size_t max_over_starts(std::size_t j, std::size_t t, std::size_t* argmax = nullptr) const;
};

/// One pass per trajectory covers every checkpoint and threshold. Counts
/// are integers, so the result does not depend on the thread count.
ExceedanceCounts count_exceedances(const MeasureSpec& spec, double lambda,
                                   const ExceedancePlan& plan, const MonteCarlo& mc);

}  // namespace gllab
