#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>

#include <gtest/gtest.h>

#include "sio/errors.hpp"
#include "sio/mc_stats.hpp"

namespace sio {
namespace {

std::vector<double> normals(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = z(rng);
  return x;
}

TEST(DeriveSeed, IsDeterministicAndSeparatesStreams) {
  EXPECT_EQ(derive_seed(1, "a", 0), derive_seed(1, "a", 0));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(2, "a", 0));
  const SeedLineage l{1, "a", 5, 10};
  EXPECT_EQ(derive_seed(l, 2), derive_seed(1, "a", 7));
}

TEST(ParallelMap, ResultDoesNotDependOnTheWorkerCount) {
  auto fn = [](std::size_t i) { return static_cast<double>(derive_seed(3, "pm", i) % 1000) * 0.5; };
  const auto one = parallel_map(1000, fn, 1);
  EXPECT_EQ(parallel_map(1000, fn, 4), one);
  EXPECT_EQ(parallel_map(1000, fn, 8), one);
}

TEST(ParallelMap, PropagatesExceptions) {
  auto fn = [](std::size_t i) -> int {
    if (i == 17) throw DomainError("boom");
    return 0;
  };
  EXPECT_THROW(parallel_map(100, fn, 4), DomainError);
}

TEST(WorkerCount, ReadsTheEnvironment) {
  ::setenv("SIO_WORKERS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  ::unsetenv("SIO_WORKERS");
  EXPECT_GE(worker_count(), 1u);
}

TEST(MeanEstimate, KnownValues) {
  const auto e = mean_estimate({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(e.value, 2.5);
  // sd = sqrt(5/3), se = sd / 2
  EXPECT_NEAR(e.se, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(e.n, 4u);
}

TEST(VarianceEstimate, StandardNormal) {
  const auto e = variance_estimate(normals(1, 100000));
  EXPECT_LE(std::abs(e.value - 1.0), 5.0 * e.se);
  // Var of s^2 for N(0,1) is about 2/n.
  EXPECT_NEAR(e.se, std::sqrt(2.0 / 100000.0), 2e-4);
}

TEST(EmpiricalCf, ConstantData) {
  const std::vector<double> x(200, 0.7);
  const auto e = empirical_cf(x, {0.0, 1.0, -2.5});
  EXPECT_EQ(e.values[0], std::complex<double>(1.0, 0.0));
  EXPECT_NEAR(std::abs(e.values[1] - std::exp(std::complex<double>(0.0, 0.7))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e.values[2] - std::exp(std::complex<double>(0.0, -1.75))), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(e.se_bound, 1.0 / std::sqrt(200.0));
}

TEST(EmpiricalCf, StandardNormal) {
  const auto x = normals(2, 100000);
  const auto e = empirical_cf(x, {1.0});
  EXPECT_LE(std::abs(e.values[0] - std::exp(-0.5)), 5.0 * e.se_bound);
}

TEST(EmpiricalCf, NeedsEnoughSamples) {
  EXPECT_THROW(empirical_cf(std::vector<double>(10, 0.0), {1.0}), DomainError);
}

TEST(CovZscore, DetectsDependence) {
  const auto a = normals(3, 20000);
  EXPECT_GT(cov_zscore(a, a), 10.0);
  EXPECT_LT(std::abs(cov_zscore(a, normals(4, 20000))), 4.0);
  EXPECT_EQ(cov_zscore(a, std::vector<double>(20000, 1.0)), 0.0);
}

TEST(CovarianceEstimate, KnownCovariance) {
  const auto a = normals(5, 50000);
  const auto n = normals(6, 50000);
  std::vector<double> b(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) b[i] = 0.5 * a[i] + n[i];
  const auto c = covariance_estimate(a, b);
  EXPECT_LE(std::abs(c.value - 0.5), 5.0 * c.se);
}

TEST(Independence, IdenticalStreamsFail) {
  const auto a = normals(7, 20000);
  const auto r = independence_check(a, a, default_independence_grid());
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.defect, r.threshold);
}

TEST(Independence, IndependentStreamsPass) {
  const auto r = independence_check(normals(8, 20000), normals(9, 20000), default_independence_grid());
  EXPECT_TRUE(r.passed);
  EXPECT_DOUBLE_EQ(r.threshold, 3.0 * (2.0 / std::sqrt(20000.0) + 1.0 / 20000.0));
}

TEST(Independence, DefectShrinksWithTheSampleSize) {
  const auto g = default_independence_grid();
  const auto small = independence_check(normals(10, 10000), normals(11, 10000), g);
  const auto large = independence_check(normals(12, 160000), normals(13, 160000), g);
  // Sixteen times the samples: the defect should fall by about four.
  EXPECT_LT(large.defect, 0.5 * small.defect);
}

}  // namespace
}  // namespace sio
