#include "gllab/matrix_walk/projective_point.hpp"

#include <cmath>
#include <numbers>

#include "gllab/common/error.hpp"

namespace gllab {

ProjectivePoint::ProjectivePoint(Eigen::VectorXd v) : v_(std::move(v)) {
  if (v_.size() < 2) throw InvariantError("ProjectivePoint: dimension must be at least 2");
  if (!v_.allFinite()) throw InvariantError("ProjectivePoint: non-finite coordinate");
  const double len = v_.norm();
  if (!(len > 0.0)) throw InvariantError("ProjectivePoint: zero vector has no direction");
  v_ /= len;
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    if (std::abs(v_(i)) > kSignThreshold) {
      if (v_(i) < 0.0) v_ = -v_;
      break;
    }
  }
}

ProjectivePoint::ProjectivePoint(std::span<const double> v)
    : ProjectivePoint(Eigen::VectorXd(
          Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())))) {}

ProjectivePoint ProjectivePoint::basis(int dim, int axis) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  v(axis) = 1.0;
  return ProjectivePoint(std::move(v));
}

ProjectivePoint ProjectivePoint::from_angle(double theta) {
  Eigen::VectorXd v(2);
  v << std::cos(theta), std::sin(theta);
  return ProjectivePoint(std::move(v));
}

double ProjectivePoint::angle() const {
  if (dim() != 2) throw UnsupportedError("ProjectivePoint::angle requires d = 2");
  return line_angle(v_(0), v_(1));
}

double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  if (a.dim() != b.dim()) throw InvariantError("projective_distance: dimension mismatch");
  return std::min((a.direction() - b.direction()).norm(), (a.direction() + b.direction()).norm());
}

double line_angle(double x, double y) {
  double t = std::atan2(y, x);
  if (t < 0.0) t += std::numbers::pi;
  if (t >= std::numbers::pi) t -= std::numbers::pi;
  return t;
}

}  // namespace gllab
