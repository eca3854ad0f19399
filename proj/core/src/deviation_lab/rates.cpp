#include "gllab/deviation_lab/rates.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <string>

#include "gllab/common/error.hpp"
#include "gllab/common/stats.hpp"

namespace gllab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_large_deviation_alpha(const TailCurve& curve, const char* regime) {
  if (curve.alpha != 1.0) {
    throw DomainError(std::string("rate_extract: the ") + regime + " regime needs a curve with alpha = 1");
  }
}

}  // namespace

std::string regime_name(const RateRegime& regime) {
  struct Visitor {
    std::string operator()(const LargeDevSmallY&) const { return "large-dev-small-y"; }
    std::string operator()(const LargeDevBigY&) const { return "large-dev-big-y"; }
    std::string operator()(const SubexpRegime&) const { return "subexp"; }
    std::string operator()(const WeakMomentRegime&) const { return "weak-moment"; }
    std::string operator()(const MdpRegime&) const { return "mdp"; }
  };
  return std::visit(Visitor{}, regime);
}

RateSequence rate_extract(const TailCurve& curve, const RateRegime& regime) {
  if (curve.n == 0) throw DomainError("rate_extract: curve has n = 0");
  const auto n = static_cast<double>(curve.n);
  double scale = 1.0;
  bool log_scale = true;

  if (std::holds_alternative<LargeDevSmallY>(regime) || std::holds_alternative<LargeDevBigY>(regime)) {
    require_large_deviation_alpha(curve, "large-deviation");
    scale = 1.0 / n;
  } else if (const auto* sub = std::get_if<SubexpRegime>(&regime)) {
    if (!(sub->r > 0.0 && sub->r < 1.0)) throw DomainError("rate_extract: subexp regime needs r in (0, 1)");
    require_large_deviation_alpha(curve, "subexp");
    scale = std::pow(n, -sub->r);
  } else if (const auto* weak = std::get_if<WeakMomentRegime>(&regime)) {
    if (!(weak->p > 1.0)) throw DomainError("rate_extract: weak-moment regime needs p > 1");
    if (curve.alpha < 1.0 / weak->p) throw DomainError("rate_extract: weak-moment regime needs alpha >= 1/p");
    scale = std::pow(n, curve.alpha * weak->p - 1.0);
    log_scale = false;
  } else {
    const BnSpec& bn = std::get<MdpRegime>(regime).bn;
    const double b = bn(curve.n);
    const double expected = std::pow(n, curve.alpha);
    if (std::abs(b - expected) > 1e-9 * expected) {
      throw DomainError("rate_extract: the curve's threshold scale n^alpha does not match b_n = " + bn.describe());
    }
    scale = n / (b * b);
  }

  RateSequence out;
  out.regime = regime_name(regime);
  out.n = curve.n;
  out.log_scale = log_scale;
  const auto map = [&](double prob) { return log_scale ? scale * std::log(prob) : scale * prob; };
  for (std::size_t i = 0; i < curve.y_grid.size(); ++i) {
    const bool censored = curve.censored[i] || curve.p_hat[i] == 0.0;
    out.y.push_back(curve.y_grid[i]);
    out.censored.push_back(censored);
    out.value.push_back(censored ? kNaN : map(curve.p_hat[i]));
    out.lo.push_back(map(curve.ci[i].lo));
    out.hi.push_back(map(curve.ci[i].hi));
    out.censor_bound.push_back(censored ? map(3.0 / static_cast<double>(curve.reps)) : kNaN);
  }
  return out;
}

RateFit regime_fit(const RateSequence& rates, double window_lo, double window_hi) {
  if (!(window_lo > 0.0) || !(window_hi >= window_lo)) throw DomainError("regime_fit: invalid window");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < rates.y.size(); ++i) {
    const double y = rates.y[i];
    const double v = rates.value[i];
    if (rates.censored[i] || !std::isfinite(v) || y < window_lo || y > window_hi) continue;
    const double magnitude = rates.log_scale ? -v : v;
    if (!(magnitude > 0.0)) continue;
    xs.push_back(std::log(y));
    ys.push_back(std::log(magnitude));
  }
  if (xs.size() < 4) {
    throw DomainError("regime_fit: need at least 4 uncensored points in the window, found " +
                      std::to_string(xs.size()));
  }
  const LinearFit fit = least_squares(xs, ys);
  RateFit out;
  out.regime = rates.regime;
  out.exponent_hat = fit.slope;
  out.constant_hat = std::exp(fit.intercept);
  out.r_squared = std::min(1.0, std::max(0.0, fit.r_squared));
  out.window_lo = window_lo;
  out.window_hi = window_hi;
  out.points = xs.size();
  return out;
}

}  // namespace gllab
