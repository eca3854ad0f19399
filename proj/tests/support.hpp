#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/square_matrix.hpp"

namespace gllab::testing {

inline SquareMatrix matrix2(double a, double b, double c, double d) {
  return SquareMatrix::from_row_major(2, std::vector<double>{a, b, c, d});
}

/// delta mass at c * rotation(theta).
inline MeasureSpec scaled_rotation_dirac(double c, double theta = 0.7) {
  return MeasureSpec::dirac(SquareMatrix::rotation(theta).scaled(c));
}

/// e^{+-s} times a fixed rotation, equal weights: log-norm increments are
/// an i.i.d. +-s walk.
inline MeasureSpec symmetric_scalar_walk(double s, int dim = 2) {
  MeasureSpec spec;
  spec.dim = dim;
  ScaledRotation sr;
  sr.log_scale = DiscreteLogScale{{-s, s}, {0.5, 0.5}};
  sr.uniform_rotation = false;
  spec.family = sr;
  return spec;
}

/// e^{+-s} * uniform rotation: same scalar increments, mixing directions.
inline MeasureSpec symmetric_scaled_rotation(double s) {
  MeasureSpec spec = symmetric_scalar_walk(s);
  std::get<ScaledRotation>(spec.family).uniform_rotation = true;
  return spec;
}

/// rotation(theta) * diag(e^stretch, e^-stretch) * scale.
inline SquareMatrix rotated_stretch(double theta, double stretch, double log_scale = 0.0) {
  const double c = std::cos(theta), s = std::sin(theta), k = std::exp(log_scale);
  return matrix2(k * c * std::exp(stretch), -k * s * std::exp(-stretch), k * s * std::exp(stretch),
                 k * c * std::exp(-stretch));
}

/// Near-isometric strongly irreducible pair with a smooth Poisson solution.
inline MeasureSpec mild_pair(double stretch = 0.2) {
  return MeasureSpec::finite({rotated_stretch(1.0, stretch), rotated_stretch(2.5, stretch)}, {0.5, 0.5});
}

/// Bounded, strongly irreducible, proximal two-matrix family with
/// log-norm increments close to +-1.5.
inline MeasureSpec two_matrix_family() {
  return MeasureSpec::finite({rotated_stretch(1.0, 0.1, 1.5), rotated_stretch(2.5, 0.1, -1.5)}, {0.5, 0.5});
}

inline MeasureSpec generic_pair() {
  return MeasureSpec::finite({matrix2(2, 1, 1, 1), matrix2(1, 1, 0, 1)}, {0.5, 0.5});
}

}  // namespace gllab::testing
