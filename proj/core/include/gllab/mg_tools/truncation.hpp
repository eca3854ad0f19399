#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gllab/mg_tools/finite_space.hpp"

namespace gllab {

/// alpha sqrt(n) / sqrt(log log n); needs n >= 3.
double lil_threshold(std::size_t n, double alpha);

/// D_k 1{|D_k| <= threshold}.
double truncate_at(double d, double threshold);

/// D~_k = D_k 1{|D_k| <= t} - E(D_k 1{|D_k| <= t} | F_{k-1}) with t the
/// threshold for (n, alpha). `conditional_mean(k, t)` supplies the
/// conditional mean of the truncated k-th term (k from 0). Throws
/// InvariantError if some |D~_k| exceeds 2t.
std::vector<double> lil_truncate(std::span<const double> d_seq,
                                 const std::function<double(std::size_t, double)>& conditional_mean,
                                 std::size_t n, double alpha);

/// Exact version on a finite space: the result is a martingale difference
/// sequence.
FiniteAdaptedSpace lil_truncate(const FiniteAdaptedSpace& space, std::size_t n, double alpha);

/// Conditional means estimated by binning a scalar state in [lo, hi).
class BinnedConditionalMean {
 public:
  BinnedConditionalMean(std::size_t bins, double lo, double hi);

  void add(double state, double value);
  /// Adds another accumulator with the same binning.
  void merge(const BinnedConditionalMean& other);
  std::size_t bin_of(double state) const;
  std::size_t bins() const noexcept { return count_.size(); }
  std::size_t count(std::size_t bin) const { return count_[bin]; }
  /// Zero for an empty bin.
  double mean(std::size_t bin) const;
  double std_error(std::size_t bin) const;
  double mean_at(double state) const { return mean(bin_of(state)); }

 private:
  double lo_;
  double hi_;
  std::vector<std::size_t> count_;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

}  // namespace gllab
