#include "gllab/common/direction_grid.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "gllab/common/error.hpp"

namespace gllab {
namespace {

// Fractional parts of k * alpha_j with alpha_j = 1/phi_d^j, phi_d the
// generalised golden ratio (root of x^{d+1} = x + 1).
std::vector<double> kronecker_alphas(int dim) {
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  std::vector<double> a(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) a[static_cast<std::size_t>(j)] = std::fmod(std::pow(1.0 / phi, j + 1), 1.0);
  return a;
}

}  // namespace

std::vector<ProjectivePoint> direction_grid(int dim, std::size_t size) {
  if (dim < 2) throw DomainError("direction_grid: dim must be at least 2");
  if (size == 0) throw DomainError("direction_grid: size must be positive");
  std::vector<ProjectivePoint> out;
  out.reserve(size);
  if (dim == 2) {
    for (std::size_t k = 0; k < size; ++k) {
      out.push_back(ProjectivePoint::from_angle(std::numbers::pi * static_cast<double>(k) /
                                                static_cast<double>(size)));
    }
    return out;
  }
  if (dim == 3) {
    // Fibonacci spiral on the upper hemisphere (antipodes are identified).
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < size; ++k) {
      const double z = 1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(size);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = golden * static_cast<double>(k);
      Eigen::VectorXd v(3);
      v << r * std::cos(t), r * std::sin(t), z;
      out.emplace_back(std::move(v));
    }
    return out;
  }
  const auto alphas = kronecker_alphas(dim);
  for (std::size_t k = 0; k < size; ++k) {
    Eigen::VectorXd v(dim);
    for (int j = 0; j < dim; ++j) {
      const double u = std::fmod(0.5 + alphas[static_cast<std::size_t>(j)] * static_cast<double>(k + 1), 1.0);
      const double clamped = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
      v(j) = std::sqrt(2.0) * boost::math::erf_inv(2.0 * clamped - 1.0);
    }
    if (v.norm() == 0.0) v(0) = 1.0;
    out.emplace_back(std::move(v));
  }
  return out;
}

}  // namespace gllab
