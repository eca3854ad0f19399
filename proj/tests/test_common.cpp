#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <sstream>

#include "gllab/common/csv.hpp"
#include "gllab/common/direction_grid.hpp"
#include "gllab/common/parallel.hpp"
#include "gllab/common/rng.hpp"
#include "gllab/common/stats.hpp"

namespace gllab {
namespace {

TEST(Rng, SameStreamReproduces) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Rng, StreamsDiffer) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 1000; ++s) seeds.insert(mix_seed(1, s));
  EXPECT_EQ(seeds.size(), 1000u);
  RngStream a(1, 0), b(1, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.uniform() == b.uniform();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, NeighbouringStreamsUncorrelated) {
  constexpr int n = 20000;
  RngStream a(3, 10), b(3, 11);
  double sab = 0, sa = 0, sb = 0, saa = 0, sbb = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sab += x * y, sa += x, sb += y, saa += x * x, sbb += y * y;
  }
  const double cov = sab / n - sa / n * sb / n;
  const double corr = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  EXPECT_LT(std::abs(corr), 4.0 / std::sqrt(n));
}

TEST(Rng, UniformRanges) {
  RngStream r(5, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = r.uniform_open_zero();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Parallel, ChunksCoverRangeOnceForAnyThreadCount) {
  for (unsigned threads : {1u, 3u, 16u}) {
    std::vector<std::atomic<int>> seen(1001);
    for_each_chunk(1001, 64, threads, [&](const ChunkRange& c) {
      EXPECT_EQ(c.begin, c.index * 64);
      for (std::size_t i = c.begin; i < c.end; ++i) seen[i]++;
    });
    for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
  }
  EXPECT_EQ(chunk_count(1001, 64), 16u);
  EXPECT_EQ(chunk_count(0, 64), 0u);
}

TEST(Csv, QuotesOnlyWhenNeeded) {
  std::ostringstream out;
  CsvWriter csv(out);
  csv.comment("manifest abc");
  csv.header({"a", "b,c"});
  csv.row({std::string("x\"y"), 0.5, std::int64_t{3}});
  EXPECT_EQ(out.str(), "# manifest abc\na,\"b,c\"\n\"x\"\"y\",0.5,3\n");
}

TEST(Csv, NumberFormatting) {
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
  EXPECT_EQ(format_number(1e-300), "1e-300");
}

TEST(Stats, WilsonIntervalContainsEstimate) {
  const Interval ci = wilson_interval(30, 100);
  EXPECT_LT(ci.lo, 0.3);
  EXPECT_GT(ci.hi, 0.3);
  EXPECT_NEAR(ci.lo, 0.2189, 1e-3);
  EXPECT_NEAR(ci.hi, 0.3958, 1e-3);
}

TEST(Stats, ZeroCountUsesRuleOfThree) {
  const Interval ci = wilson_interval(0, 1000);
  EXPECT_EQ(ci.lo, 0.0);
  EXPECT_DOUBLE_EQ(ci.hi, 3.0 / 1000.0);
}

TEST(Stats, MeanEstimate) {
  const std::vector<double> v{1, 2, 3, 4};
  const MeanEstimate m = mean_estimate(v);
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(m.count, 4u);
}

TEST(Stats, LeastSquaresExactLine) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const LinearFit f = least_squares(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
}

TEST(Stats, KsUniformDetectsUniformity) {
  RngStream r(9, 0);
  std::vector<double> u(5000), skew(5000);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = r.uniform();
    skew[i] = u[i] * u[i];
  }
  EXPECT_LT(ks_uniform_statistic(u, 0, 1), ks_critical_5pct(u.size()) * 1.5);
  EXPECT_GT(ks_uniform_statistic(skew, 0, 1), ks_critical_5pct(u.size()));
}

TEST(DirectionGrid, UnitVectorsWithCanonicalSign) {
  for (int d : {2, 3, 5}) {
    const auto grid = direction_grid(d, 50);
    ASSERT_EQ(grid.size(), 50u);
    for (const auto& x : grid) {
      EXPECT_NEAR(x.direction().norm(), 1.0, 1e-12);
      for (int i = 0; i < d; ++i) {
        if (std::abs(x[i]) > 1e-9) {
          EXPECT_GT(x[i], 0.0);
          break;
        }
      }
    }
  }
}

TEST(DirectionGrid, PlaneGridIsEquispaced) {
  const auto grid = direction_grid(2, 8);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(grid[k].angle(), static_cast<double>(k) * M_PI / 8.0, 1e-12);
  }
}

}  // namespace
}  // namespace gllab
