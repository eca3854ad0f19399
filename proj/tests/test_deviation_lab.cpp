#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "gllab/common/direction_grid.hpp"
#include "gllab/common/error.hpp"
#include "gllab/deviation_lab/deviation_engine.hpp"
#include "gllab/deviation_lab/mdp.hpp"
#include "gllab/deviation_lab/rates.hpp"
#include "gllab/deviation_lab/series.hpp"
#include "gllab/deviation_lab/tail.hpp"
#include "support.hpp"

namespace gllab {
namespace {

const double kLog2 = std::log(2.0);

/// Exact P(max_{k<=n} |S_k| > t) for the simple walk with steps +-s.
double scalar_walk_exceedance(std::size_t n, double s, double t) {
  const int width = static_cast<int>(n);
  std::vector<double> mass(2 * width + 1, 0.0), next(mass.size());
  mass[width] = 1.0;
  double absorbed = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int j = -width; j <= width; ++j) {
      const double m = mass[j + width];
      if (m == 0.0) continue;
      for (int step : {-1, 1}) {
        const int to = j + step;
        if (std::abs(to) * s > t) {
          absorbed += 0.5 * m;
        } else {
          next[to + width] += 0.5 * m;
        }
      }
    }
    mass.swap(next);
  }
  return absorbed;
}

// ------------------------------------------------------------- engine

TEST(Exceedances, ThreadCountInvariant) {
  ExceedancePlan plan{direction_grid(2, 4), {10, 50}, {{1.0, 2.0}, {3.0, 5.0}}, 700};
  const auto spec = testing::generic_pair();
  const auto a = count_exceedances(spec, 0.6, plan, {1, 1});
  const auto b = count_exceedances(spec, 0.6, plan, {1, 16});
  EXPECT_EQ(a.hits, b.hits);
  std::size_t arg = 99;
  const std::size_t best = a.max_over_starts(1, 0, &arg);
  EXPECT_LT(arg, 4u);
  for (std::size_t s = 0; s < 4; ++s) EXPECT_LE(a.hits[s][1][0], best);
}

TEST(Exceedances, CountsAreMonotone) {
  ExceedancePlan plan{direction_grid(2, 2), {20, 40}, {{0.5, 1.0, 4.0}, {0.5, 1.0, 4.0}}, 500};
  const auto c = count_exceedances(testing::generic_pair(), 0.6, plan, {2, 1});
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t t = 1; t < 3; ++t) EXPECT_LE(c.hits[s][j][t], c.hits[s][j][t - 1]);
    for (std::size_t t = 0; t < 3; ++t) EXPECT_LE(c.hits[s][0][t], c.hits[s][1][t]);
  }
}

// ---------------------------------------------------------------- tails

TEST(TailEstimate, ZeroFluctuationGivesZero) {
  const auto c = tail_estimate(testing::scaled_rotation_dirac(2.0), kLog2, 100, 1.0, {1e-6, 0.1, 1.0}, 8, 200, {1, 1});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(c.p_hat[i], 0.0);
    EXPECT_TRUE(c.censored[i]);
    EXPECT_DOUBLE_EQ(c.ci[i].hi, 3.0 / 200);
  }
}

TEST(TailEstimate, TinyYGivesOne) {
  const auto c = tail_estimate(testing::generic_pair(), 0.6, 200, 1.0, {1e-300}, 4, 200, {2, 1});
  EXPECT_EQ(c.p_hat[0], 1.0);
}

TEST(TailEstimate, ScalarWalkMatchesExactOracle) {
  const std::vector<double> ys{0.05, 0.1, 0.2, 0.3};
  const auto c = tail_estimate(testing::symmetric_scaled_rotation(kLog2), 0.0, 32, 1.0, ys, 4, 20000, {3, 1});
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double exact = scalar_walk_exceedance(32, kLog2, 32 * ys[i]);
    const double se = std::sqrt(exact * (1 - exact) / 20000);
    EXPECT_NEAR(c.p_hat[i], exact, 4 * se + 1e-12) << "y=" << ys[i];
  }
}

TEST(TailEstimate, ValidatesInputs) {
  const auto spec = testing::generic_pair();
  EXPECT_THROW(tail_estimate(spec, 0.6, 10, 1.0, {0.2, 0.1}, 2, 200, {}), DomainError);
  EXPECT_THROW(tail_estimate(spec, 0.6, 10, 1.0, {0.0, 0.1}, 2, 200, {}), DomainError);
  EXPECT_THROW(tail_estimate(spec, 0.6, 10, 0.5, {0.1}, 2, 200, {}), DomainError);
  EXPECT_THROW(tail_estimate(spec, 0.6, 10, 1.0, {0.1}, 2, 50, {}), DomainError);
}

TEST(TailCurve, RejectsNonMonotoneCounts) {
  EXPECT_THROW(make_tail_curve(10, 1.0, 0.0, {0.1, 0.2}, {1.0, 2.0}, {5, 6}, 1, 100, 0), InvariantError);
}

TEST(TailSchedule, OnePassMatchesSeparateEstimates) {
  const auto spec = testing::generic_pair();
  const auto curves = tail_schedule(spec, 0.6, {16, 64}, 1.0, {0.2, 0.4}, 2, 300, {4, 1});
  const auto single = tail_estimate(spec, 0.6, 64, 1.0, {0.2, 0.4}, 2, 300, {4, 1});
  ASSERT_EQ(curves.size(), 2u);
  EXPECT_EQ(curves[1].hits, single.hits);
}

TEST(TailSensitivity, ShiftsLambda) {
  const auto s = tail_sensitivity(testing::generic_pair(), 0.6, 0.01, 50, 1.0, {0.2}, 2, 200, {5, 1});
  EXPECT_DOUBLE_EQ(s.low.lambda, 0.58);
  EXPECT_DOUBLE_EQ(s.high.lambda, 0.62);
  EXPECT_DOUBLE_EQ(s.central.lambda, 0.6);
}

TEST(DyadicSchedule, PowersOfTwo) {
  EXPECT_EQ(dyadic_schedule(32, 4096), (std::vector<std::size_t>{32, 64, 128, 256, 512, 1024, 2048, 4096}));
  EXPECT_EQ(dyadic_schedule(5, 20), (std::vector<std::size_t>{8, 16}));
}

// ---------------------------------------------------------------- rates

TailCurve synthetic_curve(std::size_t n, double alpha, std::vector<double> ys, std::vector<std::size_t> hits,
                          std::size_t reps) {
  std::vector<double> thresholds;
  for (double y : ys) thresholds.push_back(std::pow(static_cast<double>(n), alpha) * y);
  return make_tail_curve(n, alpha, 0.0, ys, thresholds, hits, 1, reps, 0);
}

TEST(RateExtract, LargeDeviationTransform) {
  const std::size_t reps = static_cast<std::size_t>(std::llround(std::exp(10.0)));
  const auto curve = synthetic_curve(10, 1.0, {0.5}, {1}, reps);
  const auto r = rate_extract(curve, LargeDevSmallY{});
  EXPECT_NEAR(r.value[0], -1.0, 1e-5);
  EXPECT_EQ(r.regime, "large-dev-small-y");
}

TEST(RateExtract, ZeroIsCensoredNotMinusInfinity) {
  const auto curve = synthetic_curve(10, 1.0, {0.5, 0.6}, {3, 0}, 1000);
  const auto r = rate_extract(curve, LargeDevSmallY{});
  EXPECT_FALSE(r.censored[0]);
  EXPECT_TRUE(r.censored[1]);
  EXPECT_TRUE(std::isnan(r.value[1]));
  EXPECT_NEAR(r.censor_bound[1], std::log(3.0 / 1000) / 10, 1e-12);
}

TEST(RateExtract, MdpTransform) {
  const auto curve = synthetic_curve(10000, 0.75, {1.0}, {50}, 1000);
  const auto r = rate_extract(curve, MdpRegime{BnSpec::power(0.75)});
  EXPECT_NEAR(r.value[0], std::pow(10000.0, -0.5) * std::log(0.05), 1e-12);
  EXPECT_THROW(rate_extract(curve, MdpRegime{BnSpec::power(0.6)}), DomainError);
}

TEST(RateExtract, RegimeParameterChecks) {
  const auto curve = synthetic_curve(100, 0.75, {1.0}, {5}, 1000);
  EXPECT_THROW(rate_extract(curve, LargeDevSmallY{}), DomainError);
  EXPECT_THROW(rate_extract(curve, SubexpRegime{0.5}), DomainError);
  EXPECT_THROW(rate_extract(curve, WeakMomentRegime{1.2}), DomainError);
  const auto weak = rate_extract(curve, WeakMomentRegime{1.5});
  EXPECT_FALSE(weak.log_scale);
  EXPECT_NEAR(weak.value[0], std::pow(100.0, 0.125) * 0.005, 1e-12);
}

RateSequence synthetic_rates(const std::vector<double>& ys, double c, double e, bool log_scale = true) {
  RateSequence r;
  r.regime = "synthetic";
  r.log_scale = log_scale;
  for (double y : ys) {
    r.y.push_back(y);
    r.value.push_back((log_scale ? -c : c) * std::pow(y, e));
    r.lo.push_back(NAN);
    r.hi.push_back(NAN);
    r.censored.push_back(false);
    r.censor_bound.push_back(NAN);
  }
  return r;
}

TEST(RegimeFit, NoiselessPowerLaws) {
  const auto a = regime_fit(synthetic_rates({0.1, 0.2, 0.3, 0.4, 0.5}, 3.0, 2.0), 0.1, 0.5);
  EXPECT_NEAR(a.exponent_hat, 2.0, 1e-12);
  EXPECT_NEAR(a.constant_hat, 3.0, 1e-12);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  const auto b = regime_fit(synthetic_rates({1, 1.5, 2, 3, 4}, 0.5, 1.5), 1, 4);
  EXPECT_NEAR(b.exponent_hat, 1.5, 1e-12);
  const auto w = regime_fit(synthetic_rates({1, 2, 3, 4}, 2.0, -1.5, false), 1, 4);
  EXPECT_NEAR(w.exponent_hat, -1.5, 1e-12);
}

TEST(RegimeFit, NeedsFourPoints) {
  auto r = synthetic_rates({0.1, 0.2, 0.3, 0.4}, 1.0, 2.0);
  r.censored[3] = true;
  EXPECT_THROW(regime_fit(r, 0.1, 0.5), DomainError);
  EXPECT_THROW(regime_fit(synthetic_rates({0.1, 0.2, 0.3, 0.4}, 1.0, 2.0), 0.15, 0.5), DomainError);
}

// --------------------------------------------------------------- series

TEST(BaumKatz, ZeroForDirac) {
  const auto r = baum_katz_partial(testing::scaled_rotation_dirac(2.0), kLog2, 1.0, 2.0, 0.5, {16, 32, 64, 128}, 4,
                                   200, {1, 1});
  for (const auto& row : r.rows) EXPECT_EQ(row.partial_sum, 0.0);
}

TEST(BaumKatz, ExcludedPairWarns) {
  const auto r = baum_katz_partial(testing::symmetric_scalar_walk(1.0), 0.0, 0.5, 2.0, 1.0, {16, 32}, 1, 200, {1, 1});
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("diverge for p = 2"), std::string::npos);
}

TEST(BaumKatz, BoundedMeasureIncrementsDecrease) {
  const auto r = baum_katz_partial(testing::symmetric_scalar_walk(1.0), 0.0, 1.0, 2.0, 0.5,
                                   {64, 128, 256, 512, 1024}, 1, 4000, {2, 1});
  EXPECT_TRUE(r.increments_decreasing);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_LE(r.rows[i].increment, r.rows[i - 1].increment);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(LilCurve, LargeYNeverExceeds) {
  const auto r = lil_curve(testing::symmetric_scalar_walk(1.0), 0.0, 1.0, {64, 256, 1024}, 10.0, 1, 1000, {3, 1});
  for (const auto& row : r.rows) EXPECT_EQ(row.p_hat, 0.0);
}

TEST(LilCurve, DiracWithZeroVariance) {
  const auto r = lil_curve(testing::scaled_rotation_dirac(2.0), kLog2, 0.0, {16, 64}, 0.1, 4, 200, {3, 1});
  for (const auto& row : r.rows) EXPECT_EQ(row.p_hat, 0.0);
}

TEST(LilCurve, ScalarWalkThresholdsAndDecay) {
  const double v = kLog2 * kLog2;
  const double y = 1.5 * std::sqrt(v);
  const auto r = lil_curve(testing::symmetric_scalar_walk(kLog2), 0.0, v, {16, 4096}, y, 1, 3000, {4, 1});
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto& row : r.rows) {
    const double n = static_cast<double>(row.n);
    EXPECT_NEAR(row.threshold, y * std::sqrt(2 * n * std::log(std::log(n))), 1e-9);
  }
  EXPECT_GT(r.rows[0].p_hat, r.rows[1].p_hat);
  EXPECT_NE(r.verdict.find("summable expected"), std::string::npos);
  EXPECT_THROW(lil_curve(testing::symmetric_scalar_walk(1.0), 0.0, 1.0, {2, 8}, 1.0, 1, 200, {}), DomainError);
}

// ------------------------------------------------------------------ MDP

TEST(BnSpec, PowerRange) {
  EXPECT_THROW(BnSpec::power(0.5), InvariantError);
  EXPECT_THROW(BnSpec::power(1.0), InvariantError);
  EXPECT_NEAR(BnSpec::power(0.75)(16), 8.0, 1e-12);
}

TEST(BnSpec, TableValidation) {
  std::vector<double> good;
  for (int n = 1; n <= 200; ++n) good.push_back(std::pow(n, 0.7));
  const auto bn = BnSpec::table(good);
  EXPECT_EQ(bn.table_size(), 200u);
  EXPECT_THROW(bn(201), RangeError);
  std::vector<double> linear;
  for (int n = 1; n <= 50; ++n) linear.push_back(n);
  EXPECT_THROW(BnSpec::table(linear), InvariantError);
}

TEST(CofN, CubesAtNodes) {
  const auto bn = BnSpec::power(0.75);
  for (int n = 1; n <= 20; ++n) EXPECT_NEAR(c_of_n(bn, n), std::pow(n, 3.0), 1e-9 * std::pow(n, 3.0));
  double prev = 0.0;
  for (double x = 1.0; x <= 20.0; x += 0.25) {
    const double c = c_of_n(bn, x);
    EXPECT_GT(c, prev);
    prev = c;
  }
}

TEST(CofN, ClosedFormForOtherExponents) {
  const auto bn = BnSpec::power(2.0 / 3.0);  // c(n) = n^2
  for (int n = 1; n <= 30; ++n) EXPECT_NEAR(c_of_n(bn, n), n * n, 1e-9 * n * n);
}

TEST(Arcones, FiniteSupportIsSatisfied) {
  const auto tail = finite_support_log_norm_tail(testing::generic_pair());
  const auto r = arcones_check(tail, BnSpec::power(0.75), {16, 64, 256, 1024});
  EXPECT_TRUE(r.satisfied);
  EXPECT_TRUE(std::isinf(r.rows.back().log_value));
}

TEST(Arcones, ExponentialTailSatisfied) {
  const auto r = arcones_check([](double t) { return std::exp(-t); }, BnSpec::power(0.75), {16, 64, 256, 1024, 4096});
  EXPECT_TRUE(r.satisfied);
  for (const auto& row : r.rows) {
    const double n = static_cast<double>(row.n);
    const double expected = std::pow(n, -0.5) * std::log(n) * std::exp(-std::pow(n, 0.75));
    EXPECT_NEAR(row.product_value / expected, 1.0, 1e-12);
  }
}

TEST(Arcones, PowerTailFails) {
  const auto r = arcones_check([](double t) { return 1.0 / (t * t); }, BnSpec::power(0.75), {16, 64, 256, 1024, 4096});
  EXPECT_FALSE(r.satisfied);
  for (const auto& row : r.rows) {
    const double n = static_cast<double>(row.n);
    EXPECT_NEAR(row.product_value, std::pow(n, -0.5) * std::log(n) * std::pow(n, -1.5), 1e-12);
  }
}

TEST(SubexpCheck, GaussianTailMeetsEnvelope) {
  // alpha = 0.75: beta = 2/3; tail exp(-x) = exp(-x^{2/3} x^{1/3}).
  const auto r = subexp_sufficient_check(
      0.75, [](double x) { return 0.9 * std::cbrt(x); }, [](double x) { return std::exp(-x); }, {1, 2, 4, 8, 16});
  EXPECT_NEAR(r.beta, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(r.envelope_holds);
  EXPECT_TRUE(r.a_increasing);
}

TEST(MdpRate, Examples) {
  EXPECT_DOUBLE_EQ(mdp_rate(MdpPath::linear(2.0), 1.0), 2.0);
  EXPECT_TRUE(std::isinf(mdp_rate(MdpPath{{0.0, 1.0}, {1.0, 2.0}}, 1.0)));
  EXPECT_EQ(mdp_rate(MdpPath::linear(0.0), 1.0), 0.0);
  EXPECT_EQ(mdp_rate(MdpPath::linear(0.0), 0.0), 0.0);
  EXPECT_TRUE(std::isinf(mdp_rate(MdpPath::linear(1.0), 0.0)));
  for (double y : {0.3, 1.0, 2.5}) EXPECT_NEAR(mdp_rate(MdpPath::linear(y), 1.7), y * y / (2 * 1.7), 1e-14);
  const MdpPath kinked{{0.0, 0.5, 1.0}, {0.0, 1.0, 1.0}};
  EXPECT_NEAR(mdp_rate(kinked, 1.0), 0.5 * (4.0 * 0.5), 1e-14);
}

TEST(MdpCompare, DiracIsCensored) {
  const auto c = mdp_compare(testing::scaled_rotation_dirac(2.0), kLog2, 1.0, BnSpec::power(0.6), 1.0, {64, 256}, 4,
                             200, {1, 1});
  for (const auto& row : c.rows) EXPECT_TRUE(row.censored);
  EXPECT_DOUBLE_EQ(c.target, -0.5);
}

TEST(MdpCompare, TargetArithmetic) {
  const auto c = mdp_compare(testing::symmetric_scalar_walk(1.0), 0.0, 1.0, BnSpec::power(0.6), 2.0, {16}, 1, 200, {1, 1});
  EXPECT_DOUBLE_EQ(c.target, -2.0);
}

TEST(MdpCompare, ScalarWalkNearTarget) {
  const auto c = mdp_compare(testing::symmetric_scalar_walk(1.0), 0.0, 1.0, BnSpec::power(0.6), 1.0, {1024, 4096}, 1,
                             4000, {5, 1});
  for (const auto& row : c.rows) {
    EXPECT_FALSE(row.censored);
    EXPECT_GT(row.value, -1.0);
    EXPECT_LT(row.value, -0.25);
    EXPECT_LE(row.lo, row.value);
    EXPECT_GE(row.hi, row.value);
  }
}

}  // namespace
}  // namespace gllab
