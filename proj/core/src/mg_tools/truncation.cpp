#include "gllab/mg_tools/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gllab/common/error.hpp"

namespace gllab {

double lil_threshold(std::size_t n, double alpha) {
  if (n < 3) throw DomainError("lil_threshold: n must be at least 3 for log log n to be positive");
  if (!(alpha > 0.0)) throw DomainError("lil_threshold: alpha must be positive");
  const auto dn = static_cast<double>(n);
  return alpha * std::sqrt(dn) / std::sqrt(std::log(std::log(dn)));
}

double truncate_at(double d, double threshold) { return std::abs(d) <= threshold ? d : 0.0; }

std::vector<double> lil_truncate(std::span<const double> d_seq,
                                 const std::function<double(std::size_t, double)>& conditional_mean,
                                 std::size_t n, double alpha) {
  const double t = lil_threshold(n, alpha);
  std::vector<double> out(d_seq.size());
  for (std::size_t k = 0; k < d_seq.size(); ++k) {
    out[k] = truncate_at(d_seq[k], t) - conditional_mean(k, t);
    if (std::abs(out[k]) > 2.0 * t) {
      throw InvariantError("lil_truncate: |D~_" + std::to_string(k + 1) + "| exceeds twice the threshold");
    }
  }
  return out;
}

FiniteAdaptedSpace lil_truncate(const FiniteAdaptedSpace& space, std::size_t n, double alpha) {
  const double t = lil_threshold(n, alpha);
  std::vector<std::vector<double>> probs, values;
  for (std::size_t k = 0; k < space.depth(); ++k) {
    const std::size_t b = space.branching(k);
    const std::vector<double>& pr = space.child_probs(k);
    probs.push_back(pr);

    std::vector<double> level = space.level_values(k + 1);
    for (double& x : level) x = truncate_at(x, t);
    for (std::size_t m = 0; m < space.nodes(k); ++m) {
      double mean = 0.0;
      for (std::size_t c = 0; c < b; ++c) mean += pr[c] * level[m * b + c];
      for (std::size_t c = 0; c < b; ++c) {
        double& x = level[m * b + c];
        x -= mean;
        if (std::abs(x) > 2.0 * t) throw InvariantError("lil_truncate: |D~| exceeds twice the threshold");
      }
    }
    values.push_back(std::move(level));
  }
  return FiniteAdaptedSpace(std::move(probs), std::move(values));
}

BinnedConditionalMean::BinnedConditionalMean(std::size_t bins, double lo, double hi)
    : lo_(lo), hi_(hi), count_(bins, 0), sum_(bins, 0.0), sum_sq_(bins, 0.0) {
  if (bins == 0) throw DomainError("BinnedConditionalMean: need at least one bin");
  if (!(hi > lo)) throw DomainError("BinnedConditionalMean: empty state range");
}

std::size_t BinnedConditionalMean::bin_of(double state) const {
  const double pos = (state - lo_) / (hi_ - lo_) * static_cast<double>(count_.size());
  if (!(pos >= 0.0)) return 0;
  return std::min(static_cast<std::size_t>(pos), count_.size() - 1);
}

void BinnedConditionalMean::add(double state, double value) {
  const std::size_t b = bin_of(state);
  ++count_[b];
  sum_[b] += value;
  sum_sq_[b] += value * value;
}

void BinnedConditionalMean::merge(const BinnedConditionalMean& other) {
  if (other.count_.size() != count_.size() || other.lo_ != lo_ || other.hi_ != hi_) {
    throw DomainError("BinnedConditionalMean::merge: binning differs");
  }
  for (std::size_t b = 0; b < count_.size(); ++b) {
    count_[b] += other.count_[b];
    sum_[b] += other.sum_[b];
    sum_sq_[b] += other.sum_sq_[b];
  }
}

double BinnedConditionalMean::mean(std::size_t bin) const {
  return count_[bin] == 0 ? 0.0 : sum_[bin] / static_cast<double>(count_[bin]);
}

double BinnedConditionalMean::std_error(std::size_t bin) const {
  const auto c = static_cast<double>(count_[bin]);
  if (count_[bin] < 2) return std::numeric_limits<double>::infinity();
  const double m = sum_[bin] / c;
  const double var = std::max(0.0, (sum_sq_[bin] - c * m * m) / (c - 1.0));
  return std::sqrt(var / c);
}

}  // namespace gllab
