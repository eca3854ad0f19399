#pragma once

#include <cstddef>
#include <vector>

#include "gllab/coboundary/poisson.hpp"
#include "gllab/common/monte_carlo.hpp"
#include "gllab/matrix_walk/walk.hpp"

namespace gllab {

/// Splittings of the centred increments X_k - lambda along one path.
///
/// Coboundary form: X_k - lambda = D_k + psi(x_{k-1}) - psi(x_k).
/// Conditional-mean form: X_k - lambda = (X_k - sigma_bar(x_{k-1})) + R_k
/// with R_k = sigma_bar(x_{k-1}) - lambda.
struct MartingaleExtraction {
  std::vector<double> d_seq;
  std::vector<double> m_partial;
  std::vector<double> r_seq;
  std::vector<double> u_partial;
  /// Partial sums of X_k - sigma_bar(x_{k-1}).
  std::vector<double> split_martingale_partial;
  /// Partial sums of X_k - lambda.
  std::vector<double> centered_partial;

  /// max_k |split_martingale_partial + u_partial - centered_partial|.
  double split_identity_error() const;
};

/// Requires a d = 2 path. Also asserts |D_k| <= log N(Y_k) + |lambda| +
/// 2 max|psi| at every step.
MartingaleExtraction extract_martingale(const WalkPath& path, const PoissonSolution& solution,
                                        double lambda);
inline MartingaleExtraction extract_martingale(const WalkPath& path,
                                               const PoissonSolution& solution) {
  return extract_martingale(path, solution, solution.lambda_used);
}

/// The conditional-mean splitting only; needs no psi and works in any
/// dimension. d_seq and m_partial are left empty.
MartingaleExtraction split_increments(const WalkPath& path, const MeasureSpec& spec,
                                      double lambda, const SigmaBarQuadrature& quadrature = {});

struct ConditionalMeanBin {
  double angle_lo = 0.0;
  double angle_hi = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  /// |mean| <= abs_tol + 3 std_error.
  bool within = true;
};

/// Empirical check of E(D_k | x_{k-1}) = 0: D_k from `paths` walks of
/// length `n` (uniform random start angle), pooled over k and binned by
/// the angle of x_{k-1}.
struct ConditionalMeanCheck {
  std::vector<ConditionalMeanBin> bins;
  std::size_t samples = 0;
  double max_abs_mean = 0.0;
  double max_split_identity_error = 0.0;
  bool all_within = true;
};

ConditionalMeanCheck check_conditional_mean(const MeasureSpec& spec, const PoissonSolution& solution,
                                            std::size_t paths, std::size_t n, std::size_t bins,
                                            double abs_tol, const MonteCarlo& mc);

}  // namespace gllab
