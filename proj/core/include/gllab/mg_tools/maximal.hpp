#pragma once

#include "gllab/mg_tools/finite_space.hpp"

namespace gllab {

/// || max_{1<=i<=n} |S_i| ||_p computed exactly on the space.
double maximal_lp_lhs(const FiniteAdaptedSpace& space, double p);

/// Right-hand side of the dyadic maximal inequality for adapted sequences:
///   (2c_p+1) (sum ||X_j||_p^p)^{1/p}
///   + 2^{(p-1)/p} (2c_p+1) sum_{j<r} (sum_{k<=2^{r-j}}
///       ||E(S_{k2^j} - S_{(k-1)2^j} | F_{(k-1)2^j})||_p^p)^{1/p}
/// with 2^{r-1} <= n < 2^r and X_k = 0 for k > n.
double maximal_lp_rhs(const FiniteAdaptedSpace& space, double p);

}  // namespace gllab
