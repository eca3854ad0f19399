#include "gllab/matrix_walk/square_matrix.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "gllab/common/error.hpp"

namespace gllab {
namespace {

constexpr int kDirectSvdMaxDim = 4;

void check_invertible(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvariantError("SquareMatrix: matrix is not square");
  if (m.rows() < 2) throw InvariantError("SquareMatrix: dimension must be at least 2");
  if (!m.allFinite()) throw InvariantError("SquareMatrix: non-finite entry");
  const Eigen::VectorXd sv = singular_values(m);
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  if (!(largest > 0.0) || smallest < SquareMatrix::kMinConditionRatio * largest) {
    throw InvariantError("SquareMatrix: smallest singular value " + std::to_string(smallest) +
                         " below 1e-12 x largest " + std::to_string(largest));
  }
}

}  // namespace

SquareMatrix::SquareMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  check_invertible(m_);
}

SquareMatrix SquareMatrix::identity(int dim) {
  return SquareMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> diag) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(diag.size()),
                                            static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
  }
  return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::rotation(double theta) {
  Eigen::MatrixXd m(2, 2);
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::from_row_major(int dim, std::span<const double> entries) {
  if (dim < 2 || entries.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    throw InvariantError("SquareMatrix: expected " + std::to_string(dim * dim) +
                         " entries for dimension " + std::to_string(dim));
  }
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = entries[static_cast<std::size_t>(r * dim + c)];
  }
  return SquareMatrix(std::move(m));
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
  if (dim() != rhs.dim()) throw InvariantError("SquareMatrix: dimension mismatch in product");
  return SquareMatrix(m_ * rhs.m_);
}

SquareMatrix SquareMatrix::scaled(double factor) const { return SquareMatrix(factor * m_); }

SquareMatrix SquareMatrix::inverse() const {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m_);
  if (!lu.isInvertible()) throw InvariantError("SquareMatrix: matrix is singular");
  return SquareMatrix(lu.inverse());
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

double power_iteration_norm(const Eigen::MatrixXd& m, double tol, int max_iterations) {
  const Eigen::MatrixXd gram = m.transpose() * m;
  const Eigen::Index d = gram.rows();
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = 1.0 + 0.6180339887498949 * static_cast<double>(i + 1);
  v.normalize();
  double previous = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd w = gram * v;
    const double rayleigh = v.dot(w);
    const double len = w.norm();
    if (!(len > 0.0)) throw NumericError("power iteration collapsed to zero", static_cast<std::size_t>(it));
    v = w / len;
    if (it > 1 && std::abs(rayleigh - previous) <= tol * std::abs(rayleigh)) {
      return std::sqrt(rayleigh);
    }
    previous = rayleigh;
  }
  throw NumericError("power iteration did not converge after " + std::to_string(max_iterations) +
                         " iterations",
                     static_cast<std::size_t>(max_iterations));
}

double operator_norm(const SquareMatrix& m) {
  if (m.dim() <= kDirectSvdMaxDim) return singular_values(m.entries())(0);
  return power_iteration_norm(m.entries());
}

double big_n(const SquareMatrix& m) {
  if (m.dim() <= kDirectSvdMaxDim) {
    const Eigen::VectorXd sv = singular_values(m.entries());
    const double smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0)) throw InvariantError("big_n: singular matrix");
    return std::max(sv(0), 1.0 / smallest);
  }
  return std::max(operator_norm(m), operator_norm(m.inverse()));
}

}  // namespace gllab
