#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "gllab/deviation_lab/mdp.hpp"
#include "gllab/deviation_lab/tail.hpp"

namespace gllab {

/// (1/n) log p_hat; the y^2 branch below y = 1, the y^r branch above.
struct LargeDevSmallY {};
struct LargeDevBigY {};
/// (1/n^r) log p_hat, r in (0, 1).
struct SubexpRegime {
  double r = 0.5;
};
/// n^{alpha p - 1} p_hat.
struct WeakMomentRegime {
  double p = 1.5;
};
/// (n / b_n^2) log p_hat.
struct MdpRegime {
  BnSpec bn = BnSpec::power(0.75);
};

using RateRegime = std::variant<LargeDevSmallY, LargeDevBigY, SubexpRegime, WeakMomentRegime, MdpRegime>;

std::string regime_name(const RateRegime& regime);

struct RateSequence {
  std::string regime;
  std::size_t n = 0;
  std::vector<double> y;
  /// NaN where censored.
  std::vector<double> value;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<bool> censored;
  /// For censored points: the transform of the one-sided bound 3/reps.
  std::vector<double> censor_bound;
  bool log_scale = true;
};

/// Throws DomainError when the regime's parameters do not match the curve
/// (alpha = 1 for the large-deviation regimes, b_n = n^alpha for MDP, ...).
RateSequence rate_extract(const TailCurve& curve, const RateRegime& regime);

struct RateFit {
  std::string regime;
  double exponent_hat = 0.0;
  double constant_hat = 0.0;
  double r_squared = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
};

/// Least squares of log(-rate) on log y over uncensored points with y in
/// [lo, hi] (log(rate) for the weak-moment regime, whose values are
/// positive). Needs at least four points.
RateFit regime_fit(const RateSequence& rates, double window_lo, double window_hi);

}  // namespace gllab
