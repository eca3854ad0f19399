#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gllab/cocycle/cocycle_spec.hpp"
#include "gllab/common/monte_carlo.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/common/stats.hpp"
#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/projective_point.hpp"

namespace gllab {

struct LyapunovEstimate {
  double lambda_hat = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t x_grid_size = 0;
  /// (1/n) * sum of increments, one entry per trajectory, start-major.
  std::vector<double> trajectory_means;
  /// Estimate restricted to each start of the grid.
  std::vector<MeanEstimate> per_start;
};

/// Mean over reps and grid starts of (1/n) * sum sigma(Y_{k+1}, A_k x).
/// Trajectory (start s, replicate r) owns stream s * reps + r.
LyapunovEstimate estimate_lambda(const MeasureSpec& spec, const CocycleSpec& cocycle,
                                 std::size_t n, std::size_t reps, std::size_t x_grid_size,
                                 const MonteCarlo& mc);

struct VarianceEstimate {
  double v_hat = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

struct VarianceReport {
  VarianceEstimate pooled;
  std::vector<VarianceEstimate> per_start;
  /// Every pair of starts agrees within 3 joint standard errors.
  bool consistent_across_starts = true;
};

/// v_hat = (1/n) * mean((S_n - n*lambda)^2) for each start and pooled.
VarianceReport estimate_variance(const MeasureSpec& spec, const CocycleSpec& cocycle,
                                 double lambda, std::size_t n, std::size_t reps,
                                 const std::vector<ProjectivePoint>& starts,
                                 const MonteCarlo& mc);

/// Empirical law of the directions visited after `burn_in` steps.
struct OccupationSample {
  std::vector<ProjectivePoint> points;
  std::vector<double> weights;
};

OccupationSample occupation_measure(const MeasureSpec& spec, const ProjectivePoint& x0,
                                    std::size_t burn_in, std::size_t n, RngStream& rng);

struct InvarianceResidual {
  double occupation_mean = 0.0;  // nu_hat(h)
  double pushed_mean = 0.0;      // (mu x nu_hat)(h o act)
  double residual = 0.0;
  double std_error = 0.0;
};

/// Compares nu_hat(h) with a resampled estimate of the right-hand side of the
/// invariance equation. The sample must be consecutive states of one chain.
InvarianceResidual invariance_residual(const MeasureSpec& spec, const OccupationSample& sample,
                                       const std::function<double(const ProjectivePoint&)>& h,
                                       RngStream& rng);

enum class GordinVerdict { summable_looking, inconclusive, diverging };
std::string to_string(GordinVerdict v);

struct GordinReport {
  /// a_n estimate of sup_u |E sigma(Y_{n+1}, A_n u) - lambda|, n = 0..n_max.
  std::vector<double> a_n;
  std::vector<double> std_errors;
  std::vector<double> partial_sums;
  /// log-log slope over the upper half (NaN when not fitted).
  double decay_slope = 0.0;
  GordinVerdict verdict = GordinVerdict::inconclusive;
};

/// For finite supports the inner expectation over Y_{n+1} is summed exactly,
/// so a_0 is exact and only A_n is sampled.
GordinReport gordin_check(const MeasureSpec& spec, const CocycleSpec& cocycle, double lambda,
                          std::size_t n_max, std::size_t reps, std::size_t x_grid_size,
                          const MonteCarlo& mc);

struct SigmaStar {
  double grid_value = 0.0;
  std::optional<double> closed_form;
  std::size_t grid_size = 0;
};

/// sup_u |sigma(m, u)| over a direction grid; for the log-norm cocycle also
/// log N(m), and the grid value is asserted not to exceed it.
SigmaStar sigma_star(const CocycleSpec& cocycle, const SquareMatrix& m, std::size_t grid_size);

/// Non-blocking sanity checks on mu. Strong irreducibility and proximality
/// are assumed by the theory; these heuristics only raise warnings.
struct MeasureDiagnostics {
  std::size_t samples = 0;
  std::size_t representable = 0;
  double max_norm_bound_excess = 0.0;   // max(|sigma(g,u)| - log N(g))
  double max_cocycle_violation = 0.0;
  bool proximal_product_found = false;
  double max_bin_occupancy = 0.0;       // largest fraction of the chain in one cell
  std::vector<std::string> warnings;
};

MeasureDiagnostics diagnose_measure(const MeasureSpec& spec, std::size_t samples,
                                    const MonteCarlo& mc);

}  // namespace gllab
