#include "gllab/mg_tools/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "gllab/common/error.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/mg_tools/bounds.hpp"
#include "gllab/mg_tools/maximal.hpp"

namespace gllab {
namespace {

std::vector<std::vector<double>> empty_levels(std::size_t n) {
  std::vector<std::vector<double>> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k].assign(std::size_t{2} << k, 0.0);
  return values;
}

// P(X >= t) for a discrete law given as (value, mass) pairs.
class UpperTail {
 public:
  explicit UpperTail(std::vector<std::pair<double, double>> law) : law_(std::move(law)) {
    std::sort(law_.begin(), law_.end());
    suffix_.assign(law_.size() + 1, 0.0);
    for (std::size_t i = law_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + law_[i].second;
  }
  double at_least(double t) const {
    const auto it = std::lower_bound(law_.begin(), law_.end(), t,
                                     [](const auto& a, double x) { return a.first < x; });
    return suffix_[static_cast<std::size_t>(it - law_.begin())];
  }

 private:
  std::vector<std::pair<double, double>> law_;
  std::vector<double> suffix_;
};

std::vector<double> geomspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = lo * std::pow(hi / lo, t);
  }
  return out;
}

}  // namespace

std::vector<FiniteAdaptedSpace> sign_sequence_cases(std::size_t n, std::size_t random_cases,
                                                    std::uint64_t seed) {
  if (n == 0) throw DomainError("sign_sequence_cases: depth must be at least 1");
  std::vector<FiniteAdaptedSpace> cases;
  if (n <= 3) {
    std::size_t nodes = 0;
    for (std::size_t k = 0; k < n; ++k) nodes += std::size_t{2} << k;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nodes); ++mask) {
      auto values = empty_levels(n);
      std::size_t bit = 0;
      for (auto& level : values) {
        for (double& x : level) x = ((mask >> bit++) & 1U) ? 1.0 : -1.0;
      }
      cases.push_back(FiniteAdaptedSpace::fair_binary(std::move(values)));
    }
    return cases;
  }
  for (std::size_t m = 1; m <= 3; ++m) {
    const std::size_t keys = std::size_t{1} << m;
    for (std::uint64_t rule = 0; rule < (std::uint64_t{1} << keys); ++rule) {
      auto values = empty_levels(n);
      for (auto& level : values) {
        for (std::size_t node = 0; node < level.size(); ++node) {
          // Missing early coins read as 0; the node index holds the coins in order.
          level[node] = ((rule >> (node & (keys - 1))) & 1U) ? 1.0 : -1.0;
        }
      }
      cases.push_back(FiniteAdaptedSpace::fair_binary(std::move(values)));
    }
  }
  RngStream rng(seed, n);
  for (std::size_t c = 0; c < random_cases; ++c) {
    auto values = empty_levels(n);
    for (auto& level : values) {
      for (double& x : level) x = rng.uniform() < 0.5 ? -1.0 : 1.0;
    }
    cases.push_back(FiniteAdaptedSpace::fair_binary(std::move(values)));
  }
  return cases;
}

InequalitySuiteResult maximal_inequality_suite(std::size_t n_max, const std::vector<double>& ps,
                                               std::size_t random_cases, std::uint64_t seed,
                                               double tol) {
  InequalitySuiteResult result;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (const auto& space : sign_sequence_cases(n, random_cases, seed)) {
      for (double p : ps) {
        const double lhs = maximal_lp_lhs(space, p);
        const double rhs = maximal_lp_rhs(space, p);
        ++result.cases;
        if (lhs > rhs + tol) ++result.violations;
        result.worst_ratio = std::max(result.worst_ratio, lhs / rhs);
      }
    }
  }
  return result;
}

FiniteAdaptedSpace random_martingale_space(std::size_t depth, std::uint64_t seed) {
  if (depth == 0) throw DomainError("random_martingale_space: depth must be at least 1");
  RngStream rng(seed, depth);
  std::vector<std::vector<double>> probs, values;
  std::size_t nodes = 1;
  for (std::size_t k = 0; k < depth; ++k) {
    const std::size_t b = rng.uniform() < 0.5 ? 2 : 3;
    std::vector<double> pr(b);
    for (double& q : pr) q = 0.1 + rng.uniform();
    const double total = std::accumulate(pr.begin(), pr.end(), 0.0);
    for (double& q : pr) q /= total;
    probs.push_back(pr);
    nodes *= b;
    std::vector<double> level(nodes);
    // Occasional large values keep the jump term of the bound in play.
    for (double& x : level) x = rng.normal() * (rng.uniform() < 0.1 ? 5.0 : 1.0);
    values.push_back(std::move(level));
  }
  return FiniteAdaptedSpace(std::move(probs), std::move(values)).centered();
}

InequalitySuiteResult haeusler_suite(std::size_t spaces, std::size_t max_depth, std::size_t grid,
                                     std::uint64_t seed) {
  if (max_depth == 0 || grid == 0) throw DomainError("haeusler_suite: empty suite");
  InequalitySuiteResult result;
  for (std::size_t s = 0; s < spaces; ++s) {
    const std::size_t depth = 1 + s % max_depth;
    const FiniteAdaptedSpace space = random_martingale_space(depth, mix_seed(seed, s));
    const std::size_t atoms = space.atoms();

    std::vector<std::pair<double, double>> max_law, var_law, jump_law;
    const auto max_abs = space.running_max_abs();
    const auto var_sum = space.conditional_variance_sum();
    double mean_var = 0.0;
    for (std::size_t a = 0; a < atoms; ++a) {
      const double pa = space.atom_probability(a);
      max_law.emplace_back(max_abs[a], pa);
      var_law.emplace_back(var_sum[a], pa);
      mean_var += pa * var_sum[a];
    }
    for (std::size_t k = 1; k <= depth; ++k) {
      const auto d = space.lift(k);
      for (std::size_t a = 0; a < atoms; ++a) jump_law.emplace_back(std::abs(d[a]), space.atom_probability(a));
    }
    const UpperTail max_tail(std::move(max_law)), var_tail(std::move(var_law)),
        jump_tail(std::move(jump_law));

    const double sd = std::sqrt(mean_var);
    for (double gamma : geomspace(0.25 * sd, 6.0 * sd, grid)) {
      const double lhs = max_tail.at_least(gamma);
      for (double u : geomspace(0.05 * sd, 4.0 * sd, grid)) {
        const double p1 = jump_tail.at_least(u);
        for (double v : geomspace(0.05 * mean_var, 8.0 * mean_var, grid)) {
          const double bound = haeusler_bound(gamma, u, v, p1, var_tail.at_least(v));
          ++result.cases;
          if (lhs > bound) ++result.violations;
          result.worst_ratio = std::max(result.worst_ratio, lhs / bound);
        }
      }
    }
  }
  return result;
}

std::size_t sharp_dominance_failures(std::size_t grid, double lo, double hi) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("sharp_dominance_failures: bad grid range");
  const auto axis = geomspace(lo, hi, grid);
  std::size_t failures = 0;
  for (double gamma : axis) {
    for (double u : axis) {
      for (double v : axis) {
        if (haeusler_sharp_term(gamma, u, v) > haeusler_plain_term(gamma, u, v)) ++failures;
      }
    }
  }
  return failures;
}

std::vector<VbeCheck> vbe_simulation(double p, std::size_t n, std::size_t reps,
                                     const std::vector<double>& ys, const MonteCarlo& mc) {
  if (n == 0 || reps < 2) throw DomainError("vbe_simulation: need n >= 1 and reps >= 2");
  const double inv_p = 1.0 / p;
  constexpr std::size_t chunk = 1024;
  std::vector<std::vector<std::size_t>> hits(chunk_count(reps, chunk), std::vector<std::size_t>(ys.size(), 0));
  for_each_chunk(reps, chunk, mc.threads, [&](const ChunkRange& c) {
    for (std::size_t r = c.begin; r < c.end; ++r) {
      RngStream rng(mc.seed, r);
      double m = 0.0, best = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double w = std::pow(rng.uniform_open_zero(), -inv_p);
        m += rng.uniform() < 0.5 ? -w : w;
        best = std::max(best, std::abs(m));
      }
      for (std::size_t i = 0; i < ys.size(); ++i) {
        if (best >= ys[i]) ++hits[c.index][i];
      }
    }
  });
  const std::vector<double> ones(n, 1.0);
  std::vector<VbeCheck> out;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    std::size_t total = 0;
    for (const auto& h : hits) total += h[i];
    VbeCheck check;
    check.y = ys[i];
    check.empirical = static_cast<double>(total) / static_cast<double>(reps);
    check.std_error = std::sqrt(check.empirical * (1.0 - check.empirical) / static_cast<double>(reps));
    check.bound = vbe_weak_bound(p, ones, ys[i]);
    check.holds = check.empirical <= check.bound + 3.0 * check.std_error;
    out.push_back(check);
  }
  return out;
}

}  // namespace gllab
