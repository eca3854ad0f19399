#pragma once

#include <span>

#include <Eigen/Core>

namespace gllab {

/// An element g of GL_d(R), d >= 2. Construction rejects non-finite entries
/// and matrices whose smallest singular value is below 1e-12 times the
/// largest.
class SquareMatrix {
 public:
  static constexpr double kMinConditionRatio = 1e-12;

  explicit SquareMatrix(Eigen::MatrixXd entries);

  static SquareMatrix identity(int dim);
  static SquareMatrix diagonal(std::span<const double> diag);
  /// Counter-clockwise rotation of the plane by `theta`.
  static SquareMatrix rotation(double theta);
  static SquareMatrix from_row_major(int dim, std::span<const double> entries);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return m_; }
  double operator()(int row, int col) const { return m_(row, col); }

  SquareMatrix operator*(const SquareMatrix& rhs) const;
  SquareMatrix scaled(double factor) const;
  SquareMatrix inverse() const;

 private:
  Eigen::MatrixXd m_;
};

/// Singular values in decreasing order (Jacobi SVD).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& m);

/// Largest singular value by power iteration on m^T m from a fixed start
/// vector. Throws NumericError after `max_iterations`.
double power_iteration_norm(const Eigen::MatrixXd& m, double tol = 1e-12,
                            int max_iterations = 10000);

/// ||g|| = sup_{|x|=1} |gx|. Direct SVD for d <= 4, power iteration above.
double operator_norm(const SquareMatrix& m);

/// N(g) = max(||g||, ||g^{-1}||) >= 1.
double big_n(const SquareMatrix& m);

}  // namespace gllab
