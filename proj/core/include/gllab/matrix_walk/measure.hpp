#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "gllab/common/rng.hpp"
#include "gllab/matrix_walk/square_matrix.hpp"

namespace gllab {

struct FiniteSupport {
  std::vector<SquareMatrix> matrices;
  std::vector<double> weights;
};

/// Law of the log-scale c in c*R: either discrete or Gaussian.
struct DiscreteLogScale {
  std::vector<double> values;
  std::vector<double> weights;
};
struct NormalLogScale {
  double mean = 0.0;
  double sd = 1.0;
};

/// g = e^s * R with s from `log_scale` and R either a Haar rotation
/// (`uniform_rotation`) or the fixed plane rotation by `angle` (identity
/// for d > 2).
struct ScaledRotation {
  std::variant<DiscreteLogScale, NormalLogScale> log_scale;
  bool uniform_rotation = true;
  double angle = 0.0;
};

/// g = R_theta * diag(e^W, 1, ..., 1, e^{-W}) * R_phi with P(W > t) =
/// min(1, t^{-p}), so log N(g) = W has a weak moment of order exactly p.
struct HeavyTailedConjugatedDiagonal {
  double tail_index = 1.5;
  bool randomize_rotations = true;
};

/// Independent N(0, entry_std^2) entries, resampled while ill-conditioned.
struct GaussianEntries {
  double entry_std = 1.0;
};

using MeasureFamily =
    std::variant<FiniteSupport, ScaledRotation, HeavyTailedConjugatedDiagonal, GaussianEntries>;

/// Declarative description of the step law mu.
struct MeasureSpec {
  int dim = 2;
  MeasureFamily family;

  static MeasureSpec dirac(SquareMatrix g);
  static MeasureSpec finite(std::vector<SquareMatrix> matrices, std::vector<double> weights);

  /// Throws InvariantError when the description is inconsistent.
  void validate() const;
  std::string family_name() const;
  bool is_finite_support() const { return std::holds_alternative<FiniteSupport>(family); }
  const FiniteSupport& finite_support() const;
};

/// A sampled group element in factored form g = left * diag(exp(log_scales))
/// * right. The factored form lets the projective action and the cocycle be
/// evaluated in log space for draws whose entries would overflow.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(const SquareMatrix& g);
  GroupElement(Eigen::MatrixXd left, Eigen::VectorXd log_scales, Eigen::MatrixXd right,
               bool orthogonal_factors);

  int dim() const noexcept { return static_cast<int>(log_scales_.size()); }

  /// Replaces `unit` by g*unit/|g*unit| and returns log |g*unit|.
  double apply(std::span<double> unit, std::span<double> scratch) const;
  /// log |g*unit| without moving the vector.
  double log_growth(std::span<const double> unit) const;

  /// log N(g).
  double log_big_n() const noexcept { return log_n_; }
  /// log |det g|.
  double log_abs_det() const;

  /// Dense form; throws InvariantError when it is not a valid SquareMatrix.
  SquareMatrix to_matrix() const;

  // Samplers write the factors in place and then call finalize(), which
  // avoids reallocating per draw.
  Eigen::MatrixXd& left_factor() noexcept { return left_; }
  Eigen::MatrixXd& right_factor() noexcept { return right_; }
  Eigen::VectorXd& scales() noexcept { return log_scales_; }
  void finalize(bool has_right, bool orthogonal_factors);

 private:
  Eigen::MatrixXd left_;
  Eigen::VectorXd log_scales_;
  Eigen::MatrixXd right_;
  bool has_right_ = false;
  bool has_scales_ = false;
  double max_scale_ = 0.0;
  double log_n_ = 0.0;
};

/// Draws from a MeasureSpec. Finite supports are pre-factored once.
class Sampler {
 public:
  explicit Sampler(MeasureSpec spec);

  int dim() const noexcept { return spec_.dim; }
  const MeasureSpec& spec() const noexcept { return spec_; }

  /// Draws Y ~ mu. The returned reference is either a pre-built support
  /// element or `scratch`.
  const GroupElement& draw(RngStream& rng, GroupElement& scratch) const;

  /// Support elements of a finite-support measure (empty otherwise).
  const std::vector<GroupElement>& support() const noexcept { return support_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  MeasureSpec spec_;
  std::vector<GroupElement> support_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<double> log_scale_cumulative_;
};

/// One draw from mu as a validated SquareMatrix.
SquareMatrix sample_matrix(const MeasureSpec& spec, RngStream& rng);

/// Haar-distributed orthogonal matrix with determinant +1.
Eigen::MatrixXd haar_rotation(int dim, RngStream& rng);

}  // namespace gllab
