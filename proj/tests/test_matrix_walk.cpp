#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "gllab/cocycle/cocycle_spec.hpp"
#include "gllab/common/error.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/matrix_walk/measure.hpp"
#include "gllab/matrix_walk/projective_point.hpp"
#include "gllab/matrix_walk/square_matrix.hpp"
#include "gllab/matrix_walk/walk.hpp"
#include "support.hpp"

namespace gllab {
namespace {

using testing::matrix2;

const double kLog2 = std::log(2.0);

SquareMatrix random_matrix(int d, RngStream& rng) {
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal();
  return SquareMatrix(m);
}

ProjectivePoint random_point(int d, RngStream& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return ProjectivePoint(v);
}

// ------------------------------------------------------------ SquareMatrix

TEST(SquareMatrix, RejectsSingularAndNonFinite) {
  EXPECT_THROW(matrix2(1, 2, 2, 4), InvariantError);
  EXPECT_THROW(matrix2(1, 0, 0, 1e-13), InvariantError);
  EXPECT_THROW(matrix2(1, NAN, 0, 1), InvariantError);
  EXPECT_NO_THROW(matrix2(1, 0, 0, 1e-11));
}

TEST(OperatorNorm, Identity) { EXPECT_DOUBLE_EQ(operator_norm(SquareMatrix::identity(3)), 1.0); }

TEST(OperatorNorm, Diagonal) {
  const std::vector<double> diag{2.0, 0.5};
  EXPECT_NEAR(operator_norm(SquareMatrix::diagonal(diag)), 2.0, 1e-15);
}

TEST(OperatorNorm, MatchesDirectionGridOracle) {
  RngStream rng(1, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const SquareMatrix m = random_matrix(2, rng);
    double best = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double t = k * std::numbers::pi / 10000.0;
      Eigen::Vector2d x(std::cos(t), std::sin(t));
      best = std::max(best, (m.entries() * x).norm());
    }
    EXPECT_NEAR(operator_norm(m), best, 1e-6);
    EXPECT_GE(operator_norm(m), best - 1e-15);
  }
}

TEST(OperatorNorm, PowerIterationAgreesWithSvdAboveDimensionFour) {
  RngStream rng(2, 0);
  const SquareMatrix m = random_matrix(6, rng);
  EXPECT_NEAR(operator_norm(m), singular_values(m.entries())(0), 1e-9);
}

TEST(BigN, Examples) {
  EXPECT_DOUBLE_EQ(big_n(SquareMatrix::identity(2)), 1.0);
  EXPECT_NEAR(big_n(SquareMatrix::rotation(0.3)), 1.0, 1e-14);
  const std::vector<double> diag{4.0, 0.5};
  EXPECT_NEAR(big_n(SquareMatrix::diagonal(diag)), 4.0, 1e-14);
  const std::vector<double> inv{0.25, 2.0};
  EXPECT_NEAR(big_n(SquareMatrix::diagonal(inv)), 4.0, 1e-14);
}

TEST(BigN, AtLeastOne) {
  RngStream rng(3, 0);
  for (int i = 0; i < 200; ++i) EXPECT_GE(big_n(random_matrix(3, rng)), 1.0);
}

// --------------------------------------------------------- ProjectivePoint

TEST(ProjectivePoint, CanonicalSignAndNorm) {
  const ProjectivePoint a(Eigen::Vector3d(-1, 2, 2));
  const ProjectivePoint b(Eigen::Vector3d(1, -2, -2));
  EXPECT_NEAR(a.direction().norm(), 1.0, 1e-12);
  EXPECT_GT(a[0], 0.0);
  EXPECT_EQ(a.direction(), b.direction());
  const ProjectivePoint c(Eigen::Vector2d(1e-12, -1));
  EXPECT_GT(c[1], 0.0);
}

TEST(ProjectivePoint, RejectsZero) { EXPECT_THROW(ProjectivePoint(Eigen::Vector2d(0, 0)), InvariantError); }

TEST(ProjectivePoint, AngleRoundTrip) {
  for (double t : {0.0, 0.3, 1.5, 3.0}) EXPECT_NEAR(ProjectivePoint::from_angle(t).angle(), t, 1e-14);
  EXPECT_NEAR(ProjectivePoint::from_angle(std::numbers::pi + 0.25).angle(), 0.25, 1e-14);
}

// -------------------------------------------------------- act and cocycle

TEST(Act, Examples) {
  const ProjectivePoint x(Eigen::Vector2d(0.6, 0.8));
  EXPECT_LT(projective_distance(act(SquareMatrix::identity(2), x), x), 1e-15);
  const auto e1 = ProjectivePoint::basis(2, 0), e2 = ProjectivePoint::basis(2, 1);
  EXPECT_LT(projective_distance(act(matrix2(2, 0, 0, 0.5), e1), e1), 1e-15);
  EXPECT_LT(projective_distance(act(SquareMatrix::rotation(std::numbers::pi / 2), e1), e2), 1e-15);
}

TEST(CocycleSigma, Examples) {
  const ProjectivePoint x(Eigen::Vector3d(1, 2, 3));
  EXPECT_DOUBLE_EQ(cocycle_sigma(SquareMatrix::identity(3), x), 0.0);
  EXPECT_NEAR(cocycle_sigma(SquareMatrix::identity(3).scaled(2.0), x), kLog2, 1e-15);
}

TEST(CocycleSigma, IdentityOnRandomTriples) {
  RngStream rng(4, 0);
  for (int d : {2, 3}) {
    for (int i = 0; i < 2000; ++i) {
      const SquareMatrix g = random_matrix(d, rng), h = random_matrix(d, rng);
      const ProjectivePoint u = random_point(d, rng);
      EXPECT_LE(std::abs(cocycle_sigma(g * h, u) - cocycle_sigma(g, act(h, u)) - cocycle_sigma(h, u)), 1e-10);
    }
  }
}

TEST(CocycleSigma, BoundedByLogBigN) {
  RngStream rng(5, 0);
  for (int i = 0; i < 2000; ++i) {
    const SquareMatrix g = random_matrix(3, rng);
    EXPECT_LE(std::abs(cocycle_sigma(g, random_point(3, rng))), std::log(big_n(g)) + 1e-12);
  }
}

TEST(GroupElement, FactoredFormMatchesDense) {
  RngStream rng(6, 0);
  for (int i = 0; i < 100; ++i) {
    const SquareMatrix g = random_matrix(3, rng);
    const GroupElement e(g);
    const ProjectivePoint u = random_point(3, rng);
    EXPECT_NEAR(cocycle_sigma(e, u), cocycle_sigma(g, u), 1e-12);
    EXPECT_LT(projective_distance(act(e, u), act(g, u)), 1e-12);
    EXPECT_NEAR(e.log_big_n(), std::log(big_n(g)), 1e-12);
  }
}

// -------------------------------------------------------------- sampling

TEST(MeasureSpec, ValidatesWeightsAndTailIndex) {
  EXPECT_THROW(MeasureSpec::finite({SquareMatrix::identity(2)}, {0.9}), InvariantError);
  EXPECT_THROW(MeasureSpec::finite({SquareMatrix::identity(2), SquareMatrix::identity(3)}, {0.5, 0.5}),
               InvariantError);
  MeasureSpec heavy{2, HeavyTailedConjugatedDiagonal{0.0, true}};
  EXPECT_THROW(heavy.validate(), InvariantError);
  MeasureSpec ok{2, HeavyTailedConjugatedDiagonal{1.5, true}};
  EXPECT_NO_THROW(ok.validate());
}

TEST(SampleMatrix, DiracReturnsItsAtom) {
  const SquareMatrix m = matrix2(1, 2, 3, 4);
  RngStream rng(7, 0);
  const SquareMatrix s = sample_matrix(MeasureSpec::dirac(m), rng);
  EXPECT_LT((s.entries() - m.entries()).norm(), 1e-15);
}

TEST(SampleMatrix, ScaledRotationHasBigNTwo) {
  MeasureSpec spec = testing::symmetric_scaled_rotation(kLog2);
  RngStream rng(8, 0);
  for (int i = 0; i < 200; ++i) EXPECT_NEAR(big_n(sample_matrix(spec, rng)), 2.0, 1e-12);
}

TEST(SampleMatrix, HaarRotationIsOrthogonal) {
  RngStream rng(9, 0);
  for (int d : {2, 3, 4}) {
    const Eigen::MatrixXd q = haar_rotation(d, rng);
    EXPECT_LT((q.transpose() * q - Eigen::MatrixXd::Identity(d, d)).norm(), 1e-12);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-12);
  }
}

TEST(SampleMatrix, HeavyTailIndexIsExact) {
  const MeasureSpec spec{2, HeavyTailedConjugatedDiagonal{1.5, true}};
  const Sampler sampler(spec);
  RngStream rng(10, 0);
  GroupElement scratch;
  constexpr std::size_t n = 1000000;
  std::vector<double> logs(n);
  for (auto& v : logs) v = sampler.draw(rng, scratch).log_big_n();
  std::sort(logs.begin(), logs.end(), std::greater<>());
  double lo = INFINITY, hi = 0.0;
  // t^1.5 P(log N > t) over thresholds with at least 1000 exceedances.
  for (std::size_t k = 1000; k < n; k += 997) {
    const double t = logs[k];
    if (t < 1.0) break;
    const double v = std::pow(t, 1.5) * static_cast<double>(k) / n;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GT(lo, 0.85);
  EXPECT_LT(hi, 1.15);
}

TEST(SampleMatrix, UnrepresentableHeavyDrawThrows) {
  // tail index 0.05: W exceeds 709 with probability ~0.72, overflowing exp.
  const MeasureSpec spec{2, HeavyTailedConjugatedDiagonal{0.05, true}};
  RngStream rng(11, 0);
  int thrown = 0;
  for (int i = 0; i < 50; ++i) {
    try {
      (void)sample_matrix(spec, rng);
    } catch (const InvariantError&) {
      ++thrown;
    }
  }
  EXPECT_GT(thrown, 10);
}

// ------------------------------------------------------------------ walks

TEST(RunWalk, ScalarDiracGivesLogTwo) {
  RngStream rng(12, 0);
  const WalkPath p = run_walk(MeasureSpec::dirac(SquareMatrix::identity(2).scaled(2.0)),
                              ProjectivePoint::from_angle(0.4), 5, rng);
  ASSERT_EQ(p.length(), 5u);
  for (double x : p.increments) EXPECT_NEAR(x, kLog2, 1e-15);
  EXPECT_NEAR(p.log_norm_after(5), 5 * kLog2, 1e-14);
}

TEST(RunWalk, RotationGivesZero) {
  RngStream rng(13, 0);
  const WalkPath p = run_walk(MeasureSpec::dirac(SquareMatrix::rotation(1.1)), ProjectivePoint::from_angle(0.2), 50, rng);
  for (double x : p.increments) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(RunWalk, MatchesExplicitProduct) {
  for (int d : {2, 3}) {
    RngStream mrng(14, static_cast<std::uint64_t>(d));
    std::vector<SquareMatrix> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back(random_matrix(d, mrng));
    const MeasureSpec spec = MeasureSpec::finite(atoms, {0.2, 0.3, 0.5});
    const ProjectivePoint x0 = random_point(d, mrng);
    for (std::size_t n : {10u, 30u}) {
      RngStream walk_rng(15, n), replay_rng(15, n);
      const WalkPath path = run_walk(spec, x0, n, walk_rng);
      const Sampler sampler(spec);
      GroupElement scratch;
      Eigen::MatrixXd product = Eigen::MatrixXd::Identity(d, d);
      for (std::size_t k = 0; k < n; ++k) {
        product = sampler.draw(replay_rng, scratch).to_matrix().entries() * product;
        const double direct = std::log((product * x0.direction()).norm());
        EXPECT_NEAR(path.log_norm_after(k + 1), direct, 1e-8 * std::max(1.0, std::abs(direct)));
      }
      const ProjectivePoint end(Eigen::VectorXd(product * x0.direction()));
      EXPECT_LT(projective_distance(end, path.directions.back()), 1e-8);
    }
  }
}

TEST(RunWalk, SameStreamIsBitwiseIdentical) {
  const MeasureSpec spec{3, GaussianEntries{1.0}};
  RngStream a(16, 4), b(16, 4);
  const WalkPath p = run_walk(spec, ProjectivePoint::basis(3, 0), 200, a);
  const WalkPath q = run_walk(spec, ProjectivePoint::basis(3, 0), 200, b);
  EXPECT_EQ(p.increments, q.increments);
}

TEST(RunWalk, HeavyTailedWalkStaysFinite) {
  const MeasureSpec spec{3, HeavyTailedConjugatedDiagonal{0.5, true}};
  RngStream rng(17, 0);
  const WalkPath p = run_walk(spec, ProjectivePoint::basis(3, 0), 2000, rng);
  for (std::size_t k = 0; k < p.length(); ++k) {
    ASSERT_TRUE(std::isfinite(p.increments[k]));
    EXPECT_LE(std::abs(p.increments[k]), p.step_log_big_n[k] * (1 + 1e-12) + 1e-12);
  }
}

TEST(RunWalk, RejectsZeroLength) {
  RngStream rng(18, 0);
  EXPECT_THROW(run_walk(testing::generic_pair(), ProjectivePoint::basis(2, 0), 0, rng), DomainError);
}

}  // namespace
}  // namespace gllab
