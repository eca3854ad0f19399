#include "gllab/deviation_lab/deviation_engine.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "gllab/common/error.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/matrix_walk/walk.hpp"

namespace gllab {

std::size_t ExceedanceCounts::max_over_starts(std::size_t j, std::size_t t, std::size_t* argmax) const {
  std::size_t best = 0, where = 0;
  for (std::size_t s = 0; s < hits.size(); ++s) {
    if (hits[s][j][t] > best) {
      best = hits[s][j][t];
      where = s;
    }
  }
  if (argmax) *argmax = where;
  return best;
}

ExceedanceCounts count_exceedances(const MeasureSpec& spec, double lambda,
                                   const ExceedancePlan& plan, const MonteCarlo& mc) {
  if (plan.starts.empty()) throw DomainError("count_exceedances: no start directions");
  if (plan.checkpoints.empty()) throw DomainError("count_exceedances: empty schedule");
  if (plan.thresholds.size() != plan.checkpoints.size()) {
    throw DomainError("count_exceedances: one threshold list per checkpoint is required");
  }
  for (std::size_t j = 0; j < plan.checkpoints.size(); ++j) {
    if (plan.checkpoints[j] == 0 || (j > 0 && plan.checkpoints[j] <= plan.checkpoints[j - 1])) {
      throw DomainError("count_exceedances: checkpoints must be positive and strictly increasing");
    }
    const auto& th = plan.thresholds[j];
    for (std::size_t t = 1; t < th.size(); ++t) {
      if (!(th[t] > th[t - 1])) throw DomainError("count_exceedances: thresholds must be strictly increasing");
    }
  }

  const Sampler sampler(spec);
  const std::size_t n_starts = plan.starts.size();
  const std::size_t n_checks = plan.checkpoints.size();
  const std::size_t horizon = plan.checkpoints.back();

  // hist[s][j][m] counts trajectories whose maximum exceeds exactly the first m thresholds.
  auto make_hist = [&] {
    std::vector<std::vector<std::vector<std::size_t>>> h(n_starts);
    for (auto& per_start : h) {
      per_start.resize(n_checks);
      for (std::size_t j = 0; j < n_checks; ++j) per_start[j].assign(plan.thresholds[j].size() + 1, 0);
    }
    return h;
  };
  auto total = make_hist();
  std::mutex merge;

  for_each_chunk(plan.reps, 256, mc.threads, [&](const ChunkRange& c) {
    auto local = make_hist();
    for (std::size_t s = 0; s < n_starts; ++s) {
      for (std::size_t r = c.begin; r < c.end; ++r) {
        RngStream rng(mc.seed, r);
        Walker walker(sampler, plan.starts[s], rng);
        double log_norm = 0.0, worst = 0.0;
        std::size_t j = 0;
        for (std::size_t k = 1; k <= horizon; ++k) {
          log_norm += walker.step();
          worst = std::max(worst, std::abs(log_norm - static_cast<double>(k) * lambda));
          if (k == plan.checkpoints[j]) {
            const auto& th = plan.thresholds[j];
            const auto exceeded = static_cast<std::size_t>(std::lower_bound(th.begin(), th.end(), worst) - th.begin());
            ++local[s][j][exceeded];
            ++j;
          }
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    for (std::size_t s = 0; s < n_starts; ++s) {
      for (std::size_t j = 0; j < n_checks; ++j) {
        for (std::size_t m = 0; m < local[s][j].size(); ++m) total[s][j][m] += local[s][j][m];
      }
    }
  });

  ExceedanceCounts out;
  out.reps = plan.reps;
  out.hits.resize(n_starts);
  for (std::size_t s = 0; s < n_starts; ++s) {
    out.hits[s].resize(n_checks);
    for (std::size_t j = 0; j < n_checks; ++j) {
      const auto& h = total[s][j];
      auto& hits = out.hits[s][j];
      hits.assign(plan.thresholds[j].size(), 0);
      std::size_t above = 0;
      // Threshold t is exceeded by every trajectory that exceeded more than t thresholds.
      for (std::size_t t = hits.size(); t-- > 0;) {
        above += h[t + 1];
        hits[t] = above;
      }
    }
  }
  return out;
}

}  // namespace gllab
