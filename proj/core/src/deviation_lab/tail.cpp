#include "gllab/deviation_lab/tail.hpp"

#include <cmath>

#include "gllab/common/direction_grid.hpp"
#include "gllab/common/error.hpp"
#include "gllab/deviation_lab/deviation_engine.hpp"

namespace gllab {
namespace {

void check_y_grid(const std::vector<double>& y_grid) {
  if (y_grid.empty()) throw DomainError("tail estimate: empty y grid");
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (!(y_grid[i] > 0.0) || !std::isfinite(y_grid[i])) throw DomainError("tail estimate: y values must be positive");
    if (i > 0 && !(y_grid[i] > y_grid[i - 1])) throw DomainError("tail estimate: y grid must be strictly increasing");
  }
}

}  // namespace

TailCurve make_tail_curve(std::size_t n, double alpha, double lambda, std::vector<double> y_grid,
                          std::vector<double> thresholds, std::vector<std::size_t> hits,
                          std::size_t x_grid_size, std::size_t reps, std::uint64_t seed) {
  if (reps == 0) throw DomainError("make_tail_curve: reps must be positive");
  if (hits.size() != y_grid.size() || thresholds.size() != y_grid.size()) {
    throw DomainError("make_tail_curve: size mismatch");
  }
  TailCurve c;
  c.n = n;
  c.alpha = alpha;
  c.lambda = lambda;
  c.x_grid_size = x_grid_size;
  c.reps = reps;
  c.seed = seed;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] > reps) throw InvariantError("make_tail_curve: more hits than replicates");
    if (i > 0 && thresholds[i] > thresholds[i - 1] && hits[i] > hits[i - 1]) {
      throw InvariantError("tail curve is not monotone in y");
    }
    c.p_hat.push_back(static_cast<double>(hits[i]) / static_cast<double>(reps));
    c.ci.push_back(wilson_interval(hits[i], reps));
    c.censored.push_back(hits[i] == 0);
  }
  c.y_grid = std::move(y_grid);
  c.thresholds = std::move(thresholds);
  c.hits = std::move(hits);
  return c;
}

std::vector<TailCurve> tail_schedule(const MeasureSpec& spec, double lambda,
                                     const std::vector<std::size_t>& n_schedule, double alpha,
                                     const std::vector<double>& y_grid, std::size_t x_grid_size,
                                     std::size_t reps, const MonteCarlo& mc) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw DomainError("tail estimate: alpha must lie in (1/2, 1]");
  if (reps < 100) throw DomainError("tail estimate: reps must be at least 100");
  if (x_grid_size == 0) throw DomainError("tail estimate: x grid must be nonempty");
  check_y_grid(y_grid);

  ExceedancePlan plan;
  plan.starts = direction_grid(spec.dim, x_grid_size);
  plan.checkpoints = n_schedule;
  plan.reps = reps;
  for (std::size_t n : n_schedule) {
    const double scale = std::pow(static_cast<double>(n), alpha);
    std::vector<double> th;
    for (double y : y_grid) th.push_back(scale * y);
    plan.thresholds.push_back(std::move(th));
  }
  const ExceedanceCounts counts = count_exceedances(spec, lambda, plan, mc);

  std::vector<TailCurve> curves;
  for (std::size_t j = 0; j < n_schedule.size(); ++j) {
    std::vector<std::size_t> hits;
    for (std::size_t t = 0; t < y_grid.size(); ++t) hits.push_back(counts.max_over_starts(j, t));
    curves.push_back(make_tail_curve(n_schedule[j], alpha, lambda, y_grid, plan.thresholds[j],
                                     std::move(hits), plan.starts.size(), reps, mc.seed));
  }
  return curves;
}

TailCurve tail_estimate(const MeasureSpec& spec, double lambda, std::size_t n, double alpha,
                        const std::vector<double>& y_grid, std::size_t x_grid_size,
                        std::size_t reps, const MonteCarlo& mc) {
  return tail_schedule(spec, lambda, {n}, alpha, y_grid, x_grid_size, reps, mc).front();
}

TailSensitivity tail_sensitivity(const MeasureSpec& spec, double lambda_hat, double std_error,
                                 std::size_t n, double alpha, const std::vector<double>& y_grid,
                                 std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc) {
  if (!(std_error >= 0.0)) throw DomainError("tail_sensitivity: standard error must be non-negative");
  return {tail_estimate(spec, lambda_hat - 2.0 * std_error, n, alpha, y_grid, x_grid_size, reps, mc),
          tail_estimate(spec, lambda_hat, n, alpha, y_grid, x_grid_size, reps, mc),
          tail_estimate(spec, lambda_hat + 2.0 * std_error, n, alpha, y_grid, x_grid_size, reps, mc)};
}

std::vector<std::size_t> dyadic_schedule(std::size_t n_min, std::size_t n_max) {
  if (n_min == 0 || n_max < n_min) throw DomainError("dyadic_schedule: need 1 <= n_min <= n_max");
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= n_max; n *= 2) {
    if (n >= n_min) out.push_back(n);
  }
  if (out.empty()) throw DomainError("dyadic_schedule: no power of two in range");
  return out;
}

}  // namespace gllab
