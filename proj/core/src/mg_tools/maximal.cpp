#include "gllab/mg_tools/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gllab/common/error.hpp"
#include "gllab/mg_tools/bounds.hpp"

namespace gllab {

double maximal_lp_lhs(const FiniteAdaptedSpace& space, double p) {
  if (!(p >= 1.0)) throw DomainError("maximal_lp_lhs: p must be at least 1");
  return space.lp_norm(space.running_max_abs(), p);
}

double maximal_lp_rhs(const FiniteAdaptedSpace& space, double p) {
  const double cp = maximal_constant_cp(p);
  const std::size_t n = space.depth();
  std::size_t r = 0;
  while ((std::size_t{1} << r) <= n) ++r;  // 2^{r-1} <= n < 2^r

  const auto sums = space.partial_sums();
  const std::size_t atoms = space.atoms();
  auto s_at = [&](std::size_t k, std::size_t a) {
    if (k == 0) return 0.0;
    return sums[std::min(k, n) - 1][a];
  };

  double first = 0.0;
  for (std::size_t k = 1; k <= n; ++k) first += std::pow(space.lp_norm(space.lift(k), p), p);
  first = std::pow(first, 1.0 / p);

  double second = 0.0;
  std::vector<double> block(atoms);
  for (std::size_t j = 0; j < r; ++j) {
    const std::size_t len = std::size_t{1} << j;
    const std::size_t blocks = std::size_t{1} << (r - j);
    double inner = 0.0;
    for (std::size_t k = 1; k <= blocks; ++k) {
      const std::size_t from = (k - 1) * len;
      if (from >= n) break;  // zero-extended blocks vanish
      for (std::size_t a = 0; a < atoms; ++a) block[a] = s_at(k * len, a) - s_at(from, a);
      const auto cond = space.lift_nodes(space.conditional_expectation(block, from), from);
      inner += std::pow(space.lp_norm(cond, p), p);
    }
    second += std::pow(inner, 1.0 / p);
  }
  return (2.0 * cp + 1.0) * first + std::pow(2.0, (p - 1.0) / p) * (2.0 * cp + 1.0) * second;
}

}  // namespace gllab
