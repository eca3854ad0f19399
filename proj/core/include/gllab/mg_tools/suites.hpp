#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gllab/common/monte_carlo.hpp"
#include "gllab/mg_tools/finite_space.hpp"

namespace gllab {

struct InequalitySuiteResult {
  std::size_t cases = 0;
  std::size_t violations = 0;
  /// Largest lhs / rhs seen.
  double worst_ratio = 0.0;
};

/// Adapted +-1 sequences on the fair binary tree of depth n used to check
/// the dyadic maximal inequality: every sequence for n <= 3; for larger n
/// every rule X_k = f(last m coins) with m <= 3 plus `random_cases` random
/// assignments.
std::vector<FiniteAdaptedSpace> sign_sequence_cases(std::size_t n, std::size_t random_cases,
                                                    std::uint64_t seed);

InequalitySuiteResult maximal_inequality_suite(std::size_t n_max, const std::vector<double>& ps,
                                               std::size_t random_cases, std::uint64_t seed,
                                               double tol = 1e-12);

/// A random centred space of the given depth, branching 2 or 3 per level.
FiniteAdaptedSpace random_martingale_space(std::size_t depth, std::uint64_t seed);

/// Exact P(max|M_k| >= gamma) against haeusler_bound over a grid of
/// grid^3 points (gamma, u, v) scaled to each space.
InequalitySuiteResult haeusler_suite(std::size_t spaces, std::size_t max_depth, std::size_t grid,
                                     std::uint64_t seed);

/// haeusler_sharp_term <= haeusler_plain_term on a grid^3 log grid over
/// [lo, hi]^3; returns the number of failures.
std::size_t sharp_dominance_failures(std::size_t grid, double lo, double hi);

struct VbeCheck {
  double y = 0.0;
  double empirical = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  bool holds = false;  // empirical <= bound + 3 std_error
};

/// Simulates M_k = sum eps_j W_j with Rademacher signs and P(W > t) = t^{-p}
/// (t >= 1), so every increment has weak L^p norm 1, and compares
/// P(max|M_k| >= y) with vbe_weak_bound.
std::vector<VbeCheck> vbe_simulation(double p, std::size_t n, std::size_t reps,
                                     const std::vector<double>& ys, const MonteCarlo& mc);

}  // namespace gllab
