#pragma once

#include <cstddef>
#include <vector>

#include "gllab/matrix_walk/projective_point.hpp"

namespace gllab {

/// Deterministic quasi-uniform directions on P^{d-1}(R). d = 2 uses
/// equispaced angles k*pi/size on the half circle; d = 3 a Fibonacci
/// spiral; d >= 4 a Kronecker sequence pushed through the Gaussian
/// quantile and normalised.
std::vector<ProjectivePoint> direction_grid(int dim, std::size_t size);

}  // namespace gllab
