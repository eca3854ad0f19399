#include "gllab/mg_tools/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gllab/common/error.hpp"

namespace gllab {
namespace {

void require_positive(double gamma, double u, double v, const char* who) {
  if (!(gamma > 0.0) || !(u > 0.0) || !(v > 0.0)) {
    throw DomainError(std::string(who) + ": gamma, u and v must be positive");
  }
}

void require_open_unit_interval(double p, const char* who) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError(std::string(who) + ": p must lie in (1, 2)");
}

}  // namespace

double haeusler_plain_term(double gamma, double u, double v) {
  require_positive(gamma, u, v, "haeusler_plain_term");
  return std::exp(gamma / u * (1.0 - std::log(gamma * u / v)));
}

double haeusler_bound(double gamma, double u, double v, double p1, double p2) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0)) throw DomainError("haeusler_bound: p1 and p2 must be non-negative");
  return p1 + 2.0 * p2 + 2.0 * haeusler_plain_term(gamma, u, v);
}

double haeusler_sharp_term(double gamma, double u, double v) {
  require_positive(gamma, u, v, "haeusler_sharp_term");
  const double a = gamma / u;
  return std::exp(a - (a + v / (u * u)) * std::log1p(gamma * u / v));
}

WeakLpEstimate weak_lp_norm(std::span<const double> samples, double p, std::size_t min_tail_count) {
  if (samples.empty()) throw DomainError("weak_lp_norm: empty sample");
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("weak_lp_norm: p must be positive");
  if (min_tail_count == 0 || min_tail_count > samples.size()) {
    throw DomainError("weak_lp_norm: min_tail_count must be in [1, sample size]");
  }
  std::vector<double> a(samples.size());
  std::transform(samples.begin(), samples.end(), a.begin(), [](double x) { return std::abs(x); });
  std::sort(a.begin(), a.end(), std::greater<>());
  const auto total = static_cast<double>(a.size());
  WeakLpEstimate out{p, 0.0, a.size()};
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Evaluate at the last copy of each distinct value: i+1 samples are >= a[i].
    if (i + 1 < a.size() && a[i + 1] == a[i]) continue;
    if (i + 1 < min_tail_count) continue;
    const double tail = static_cast<double>(i + 1) / total;
    out.value = std::max(out.value, a[i] * std::pow(tail, 1.0 / p));
  }
  return out;
}

double vbe_constant(double p) {
  require_open_unit_interval(p, "vbe_constant");
  return 4.0 * p / (p - 1.0) + 8.0 / (2.0 - p);
}

double vbe_weak_bound(double p, std::span<const double> weak_norms, double y) {
  const double k = vbe_constant(p);
  if (!(y > 0.0)) throw DomainError("vbe_weak_bound: y must be positive");
  double sum = 0.0;
  for (double w : weak_norms) {
    if (!(w >= 0.0)) throw DomainError("vbe_weak_bound: weak norms must be non-negative");
    sum += std::pow(w, p);
  }
  return k / std::pow(y, p) * sum;
}

double maximal_constant_cp(double p) {
  if (!(p > 1.0)) throw DomainError("maximal_constant_cp: p must exceed 1");
  return std::pow(2.0, 1.0 / p) * p / (p - 1.0);
}

double hao_liu_bound(std::size_t n, double lambda, const std::function<double(double)>& dominating_tail,
                     double conditional_moment_norm, const HaoLiuParams& params) {
  if (!(lambda > 0.0)) throw DomainError("hao_liu_bound: lambda must be positive");
  if (!(params.q > 1.0)) throw DomainError("hao_liu_bound: q must exceed 1");
  if (!(params.gamma > 1.0 && params.gamma <= 2.0)) throw DomainError("hao_liu_bound: gamma must lie in (1, 2]");
  if (!(params.C > 0.0)) throw DomainError("hao_liu_bound: C must be positive");
  if (!(conditional_moment_norm >= 0.0)) throw DomainError("hao_liu_bound: moment norm must be non-negative");
  const double l1 = static_cast<double>(params.L) + 1.0;
  const double ratio = l1 / (params.q + static_cast<double>(params.L));
  const double first = static_cast<double>(n) * dominating_tail(lambda / (4.0 * l1));
  const double second = params.C * std::pow(lambda, -params.q * params.gamma * ratio) *
                        std::pow(conditional_moment_norm, params.q * ratio);
  return first + second;
}

}  // namespace gllab
