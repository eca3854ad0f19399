#include "gllab/common/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gllab/common/error.hpp"

namespace gllab {

Interval wilson_interval(std::size_t hits, std::size_t trials, double z) {
  if (trials == 0) throw DomainError("wilson_interval: zero trials");
  const double n = static_cast<double>(trials);
  if (hits == 0) return {0.0, std::min(1.0, 3.0 / n)};
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MeanEstimate mean_estimate(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

MeanEstimate batch_means(std::span<const double> series, std::size_t batches) {
  if (batches < 2 || series.size() < batches) {
    MeanEstimate out = mean_estimate(series);
    return out;
  }
  const std::size_t len = series.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += series[i];
    means[b] = s / static_cast<double>(len);
  }
  MeanEstimate out = mean_estimate(means);
  double total = 0.0;
  for (double v : series) total += v;
  out.mean = total / static_cast<double>(series.size());
  out.count = series.size();
  return out;
}

LinearFit least_squares(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("least_squares: size mismatch");
  if (xs.size() < 2) throw DomainError("least_squares: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0) throw DomainError("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  fit.points = xs.size();
  return fit;
}

double ks_uniform_statistic(std::vector<double> samples, double lo, double hi) {
  if (samples.empty()) throw DomainError("ks_uniform_statistic: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = std::clamp((samples[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_5pct(std::size_t n) { return 1.3580986393225505 / std::sqrt(static_cast<double>(n)); }

}  // namespace gllab
