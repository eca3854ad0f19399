#pragma once

#include <span>

#include <Eigen/Core>

namespace gllab {

/// A point of the projective space P^{d-1}(R), stored as a unit vector whose
/// first coordinate of magnitude above 1e-9 is positive, so x and -x share
/// one representative.
class ProjectivePoint {
 public:
  static constexpr double kSignThreshold = 1e-9;

  /// Normalises and canonicalises `v`; throws InvariantError for a zero or
  /// non-finite vector.
  explicit ProjectivePoint(Eigen::VectorXd v);
  ProjectivePoint(std::span<const double> v);

  static ProjectivePoint basis(int dim, int axis);
  /// (cos theta, sin theta) in the plane.
  static ProjectivePoint from_angle(double theta);

  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const Eigen::VectorXd& direction() const noexcept { return v_; }
  double operator[](int i) const { return v_(i); }

  /// d = 2 only: the angle of the class in [0, pi).
  double angle() const;

 private:
  Eigen::VectorXd v_;
};

/// Distance between classes: min(|x - y|, |x + y|).
double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// Angle in [0, pi) of the line through (x, y).
double line_angle(double x, double y);

}  // namespace gllab
