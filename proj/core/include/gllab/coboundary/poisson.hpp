#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "gllab/common/monte_carlo.hpp"
#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/projective_point.hpp"

namespace gllab {

struct SigmaBarQuadrature {
  /// Monte Carlo draws used when mu is not finitely supported.
  std::size_t samples = 100000;
  MonteCarlo mc;
};

struct SigmaBarValue {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

/// Mean of sigma(g, u) under mu: an exact weighted sum for finite supports,
/// a Monte Carlo mean otherwise.
SigmaBarValue sigma_bar(const MeasureSpec& spec, const ProjectivePoint& u,
                        const SigmaBarQuadrature& quadrature = {});

/// Solution of psi - P psi = sigma_bar - lambda on an angular grid (d = 2).
struct PoissonSolution {
  std::vector<ProjectivePoint> grid;  // angles k*pi/2^m
  std::vector<double> psi;
  double lambda_used = 0.0;
  std::size_t truncation_terms = 0;
  /// Sup norm of the last term included in the series.
  double tail_bound = 0.0;
  /// sup |psi - P psi - (sigma_bar - lambda)| on the grid.
  double grid_residual = 0.0;
  /// Same residual on the twice-finer grid, psi interpolated.
  double verification_residual = 0.0;

  std::vector<GroupElement> support;
  std::vector<double> weights;

  std::size_t grid_size() const noexcept { return psi.size(); }
  double max_abs_psi() const;
  /// Linear interpolation in the angle, periodic on [0, pi).
  double psi_at(double angle) const;
  double psi_at(const ProjectivePoint& u) const;
  double psi_at(std::span<const double> unit) const;
  double sigma_bar_at(std::span<const double> unit) const;
  /// (P psi)(u) with psi interpolated.
  double pushed_psi_at(std::span<const double> unit) const;

  /// Two columns: angle, psi.
  void write_csv(std::ostream& out) const;
};

/// Sums the series psi = sum_j P^j (sigma_bar - lambda) for the grid
/// operator. Without `lambda`, the stationary mean of sigma_bar under the
/// grid operator is used; any other value leaves a constant that never
/// decays. Throws UnsupportedError for d != 2 or a non-finite support and
/// NumericError when the terms do not decay geometrically.
PoissonSolution solve_poisson(const MeasureSpec& spec, std::optional<double> lambda,
                              unsigned grid_power, double tol);

struct RefinementStep {
  unsigned grid_power = 0;
  double max_abs_psi = 0.0;
  /// sup over the finer grid of |psi_m - psi_{m-1}| (NaN for the first level).
  double sup_change = 0.0;
};

/// Solves at each grid power in [m_lo, m_hi] and records how much psi moves.
std::vector<RefinementStep> refinement_study(const MeasureSpec& spec, unsigned m_lo,
                                             unsigned m_hi, double tol);

}  // namespace gllab
