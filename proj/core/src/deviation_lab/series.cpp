#include "gllab/deviation_lab/series.hpp"

#include <cmath>
#include <functional>

#include "gllab/common/direction_grid.hpp"
#include "gllab/common/error.hpp"
#include "gllab/deviation_lab/deviation_engine.hpp"

namespace gllab {
namespace {

SeriesReport run_series(const MeasureSpec& spec, double lambda, const std::vector<std::size_t>& schedule,
                        const std::function<double(std::size_t)>& threshold,
                        const std::function<double(std::size_t)>& weight, std::size_t x_grid_size,
                        std::size_t reps, const MonteCarlo& mc) {
  if (reps == 0 || x_grid_size == 0) throw DomainError("series: reps and x grid must be positive");
  ExceedancePlan plan;
  plan.starts = direction_grid(spec.dim, x_grid_size);
  plan.checkpoints = schedule;
  plan.reps = reps;
  for (std::size_t n : schedule) plan.thresholds.push_back({threshold(n)});
  const ExceedanceCounts counts = count_exceedances(spec, lambda, plan, mc);

  SeriesReport report;
  double sum = 0.0, sum_lo = 0.0, sum_hi = 0.0;
  double prev_term = 0.0, prev_lo = 0.0, prev_hi = 0.0;
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    SeriesRow row;
    row.n = schedule[j];
    row.threshold = plan.thresholds[j][0];
    row.hits = counts.max_over_starts(j, 0);
    row.p_hat = static_cast<double>(row.hits) / static_cast<double>(reps);
    row.ci = wilson_interval(row.hits, reps);
    const double w = weight(row.n);
    row.term = w * row.p_hat;
    const double term_lo = w * row.ci.lo;
    const double term_hi = w * row.ci.hi;
    if (j == 0) {
      const auto count = static_cast<double>(row.n);
      row.increment = count * row.term;
      sum_lo += count * term_lo;
      sum_hi += count * term_hi;
    } else {
      const auto gap = static_cast<double>(row.n - schedule[j - 1]);
      row.increment = gap * 0.5 * (prev_term + row.term);
      sum_lo += gap * 0.5 * (prev_lo + term_lo);
      sum_hi += gap * 0.5 * (prev_hi + term_hi);
    }
    sum += row.increment;
    row.partial_sum = sum;
    row.partial_lo = sum_lo;
    row.partial_hi = sum_hi;
    prev_term = row.term;
    prev_lo = term_lo;
    prev_hi = term_hi;
    report.rows.push_back(row);
  }

  const auto& rows = report.rows;
  if (rows.size() < 4) {
    report.verdict = "inconclusive: schedule too short";
    return report;
  }
  report.increments_decreasing = true;
  for (std::size_t i = rows.size() / 2 + 1; i < rows.size(); ++i) {
    if (rows[i].increment > rows[i - 1].increment) report.increments_decreasing = false;
  }
  report.verdict = report.increments_decreasing ? "converging-looking: increments non-increasing over the last half"
                                                : "not converging: increments grow over the last half";
  return report;
}

}  // namespace

SeriesReport baum_katz_partial(const MeasureSpec& spec, double lambda, double alpha, double p,
                               double y, const std::vector<std::size_t>& n_schedule,
                               std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc) {
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw DomainError("baum_katz_partial: alpha must lie in [1/2, 1]");
  if (!(p > 0.0)) throw DomainError("baum_katz_partial: p must be positive");
  if (!(y > 0.0)) throw DomainError("baum_katz_partial: y must be positive");
  SeriesReport report = run_series(
      spec, lambda, n_schedule,
      [&](std::size_t n) { return std::pow(static_cast<double>(n), alpha) * y; },
      [&](std::size_t n) { return std::pow(static_cast<double>(n), alpha * p - 2.0); }, x_grid_size, reps, mc);
  if (p == 2.0 && alpha == 0.5) {
    report.warnings.push_back("the series is known to diverge for p = 2 and alpha = 1/2; use the LIL diagnostic instead");
  } else if (alpha < 1.0 / p) {
    report.warnings.push_back("alpha < 1/p lies outside the hypothesis alpha >= 1/p; the series need not converge");
  }
  if (alpha == 0.5 && !(p == 2.0)) {
    report.warnings.push_back("alpha = 1/2 is the central-limit scale, outside (1/2, 1]");
  }
  return report;
}

SeriesReport lil_curve(const MeasureSpec& spec, double lambda, double v,
                       const std::vector<std::size_t>& n_schedule, double y,
                       std::size_t x_grid_size, std::size_t reps, const MonteCarlo& mc) {
  if (!(y > 0.0)) throw DomainError("lil_curve: y must be positive");
  if (!(v >= 0.0)) throw DomainError("lil_curve: V must be non-negative");
  for (std::size_t n : n_schedule) {
    if (n < 3) throw DomainError("lil_curve: every n must be at least 3");
  }
  SeriesReport report = run_series(
      spec, lambda, n_schedule,
      [&](std::size_t n) {
        const auto dn = static_cast<double>(n);
        return y * std::sqrt(2.0 * dn * std::log(std::log(dn)));
      },
      [](std::size_t n) { return 1.0 / static_cast<double>(n); }, x_grid_size, reps, mc);
  const std::string regime = y > std::sqrt(v) ? "y > sqrt(V), summable expected" : "y <= sqrt(V), divergence expected";
  report.verdict = regime + "; " + report.verdict;
  return report;
}

}  // namespace gllab
