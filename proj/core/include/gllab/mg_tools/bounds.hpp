#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace gllab {

/// Haeusler's inequality for a martingale M_k = D_1 + ... + D_k:
///   P(max|M_k| >= gamma) <= p1 + 2 p2 + 2 exp((gamma/u)(1 - log(gamma u / v)))
/// where p1 = sum P(|D_i| >= u) and p2 = P(sum E(D_i^2 | F_{i-1}) >= v).
/// Returns +inf when the exponential term overflows.
double haeusler_bound(double gamma, double u, double v, double p1, double p2);

/// The exponential term of the plain bound, without the factor 2.
double haeusler_plain_term(double gamma, double u, double v);

/// exp(gamma/u - (gamma/u + v/u^2) log(gamma u / v + 1)); never larger than
/// haeusler_plain_term.
double haeusler_sharp_term(double gamma, double u, double v);

struct WeakLpEstimate {
  double p = 0.0;
  double value = 0.0;
  std::size_t sample_size = 0;
};

/// Empirical weak L^p norm sup_t t * P(|X| >= t)^{1/p}, evaluated at the
/// order statistics. With min_tail_count = m only thresholds with at least
/// m samples at or above them are considered.
WeakLpEstimate weak_lp_norm(std::span<const double> samples, double p,
                            std::size_t min_tail_count = 1);

/// K(p) = 4p/(p-1) + 8/(2-p), p in (1, 2).
double vbe_constant(double p);

/// (K(p) / y^p) * sum ||D_k||_{p,inf}^p: a bound on P(max|M_k| >= y) for
/// martingales whose increments have the given weak norms.
double vbe_weak_bound(double p, std::span<const double> weak_norms, double y);

/// c_p = 2^{1/p} p / (p - 1).
double maximal_constant_cp(double p);

/// Parameters of the complete-convergence bound for martingales whose
/// increments are stochastically dominated by a variable X:
///   P(max|M_k| >= lambda) <= n P(X > lambda / (4(L+1)))
///     + C lambda^{-q gamma (L+1)/(q+L)} * Q^{q(L+1)/(q+L)}
/// with Q = || sum E(|D_k|^gamma | F_{k-1}) ||_q. The constant C exists but
/// has no known value, so it is supplied by the caller.
struct HaoLiuParams {
  double q = 2.0;
  double gamma = 2.0;
  unsigned L = 1;
  double C = 1.0;
};

double hao_liu_bound(std::size_t n, double lambda, const std::function<double(double)>& dominating_tail,
                     double conditional_moment_norm, const HaoLiuParams& params);

}  // namespace gllab
