#include <cmath>

#include <gtest/gtest.h>

#include "sio/errors.hpp"
#include "sio/size_dist.hpp"

namespace sio {
namespace {

double sq(double y) { return y * y; }

TEST(SizeDist, PointAndMixtureMomentsAreExact) {
  const SizeDist p = SizeDist::point(2.0);
  EXPECT_EQ(p.moment(2), 4.0);
  EXPECT_EQ(p.moment(2, Region::small, 1.0), 0.0);
  const SizeDist m = SizeDist::mixture({-1.0, 1.0}, {0.5, 0.5});
  EXPECT_EQ(m.moment(1), 0.0);
  EXPECT_EQ(m.moment(2), 1.0);
  EXPECT_EQ(m.probability(Region::large, 1.0), 1.0);
}

TEST(SizeDist, RejectsMassAtZero) {
  EXPECT_THROW(SizeDist::point(0.0), DomainError);
  EXPECT_THROW(SizeDist::mixture({0.0, 1.0}, {0.5, 0.5}), DomainError);
}

TEST(SizeDist, UniformMomentsMatchTheClosedForm) {
  const double lo = -1.5, hi = 2.0;
  const SizeDist u = SizeDist::uniform(lo, hi);
  EXPECT_NEAR(u.moment(2), (hi * hi * hi - lo * lo * lo) / (3.0 * (hi - lo)), 1e-13);
  // E[y^2; |y| < 1] = (int_{-1}^{1} y^2 dy) / 3.5
  EXPECT_NEAR(u.moment(2, Region::small, 1.0), (2.0 / 3.0) / (hi - lo), 1e-13);
  EXPECT_NEAR(u.probability(Region::large, 1.0), 1.5 / 3.5, 1e-13);
}

TEST(SizeDist, GaussianMomentsMatchTheClosedForm) {
  const SizeDist g = SizeDist::gaussian(0.3, 1.2);
  EXPECT_NEAR(g.moment(1), 0.3, 1e-12);
  EXPECT_NEAR(g.moment(2), 0.09 + 1.44, 1e-12);
  const double a = 1.0;
  const double p_small = normal_cdf((a - 0.3) / 1.2) - normal_cdf((-a - 0.3) / 1.2);
  EXPECT_NEAR(g.probability(Region::small, a), p_small, 1e-12);
}

TEST(SizeDist, QuantileOfAMixtureIsRightContinuous) {
  const SizeDist m = SizeDist::mixture({-1.0, 2.0}, {0.25, 0.75});
  const double z = normal_quantile(0.25);
  EXPECT_EQ(m.from_normal_score(z - 1e-9), -1.0);
  EXPECT_EQ(m.from_normal_score(z + 1e-9), 2.0);
  EXPECT_EQ(SizeDist::point(1.5).from_normal_score(3.0), 1.5);
}

TEST(SizeDist, ScalingMultipliesTheSizes) {
  const SizeDist m = SizeDist::mixture({-1.0, 2.0}, {0.25, 0.75}).scaled(2.0);
  EXPECT_EQ(m.points().back(), 4.0);
  EXPECT_NEAR(SizeDist::gaussian(1.0, 1.0).scaled(3.0).moment(2), 9.0 * 2.0, 1e-12);
}

TEST(Copula, IndependentCaseFactorises) {
  const SizeDist u = SizeDist::uniform(-1.5, 2.0);
  const double m = u.moment(1);
  EXPECT_NEAR(copula_cross_moment(u, 0.0, Region::all, 1.0, Region::all, 1.0), m * m, 1e-12);
}

TEST(Copula, GaussianSizesGiveTheBivariateNormalMoment) {
  // q_F(Phi(z)) = mu + sd z, so E[q(Z1) q(Z2)] = mu^2 + sd^2 rho.
  const SizeDist g = SizeDist::gaussian(0.3, 1.2);
  for (double r : {-0.6, 0.2, 0.9}) {
    EXPECT_NEAR(copula_cross_moment(g, r, Region::all, 1.0, Region::all, 1.0),
                0.09 + 1.44 * r, 1e-9);
  }
}

TEST(Copula, RegionsPartitionTheMoment) {
  const SizeDist u = SizeDist::uniform(-1.5, 2.0);
  const double r = 0.4;
  const double a = 1.0;
  const double whole = copula_cross_moment(u, r, Region::all, a, Region::all, a);
  double parts = 0.0;
  for (Region r1 : {Region::large, Region::small}) {
    for (Region r2 : {Region::large, Region::small}) {
      parts += copula_cross_moment(u, r, r1, a, r2, a);
    }
  }
  EXPECT_NEAR(parts, whole, 1e-9);
}

TEST(Copula, FullCorrelationIsTheTruncatedSecondMoment) {
  const SizeDist u = SizeDist::uniform(-1.5, 2.0);
  EXPECT_NEAR(copula_cross_moment(u, 1.0, Region::large, 1.0, Region::large, 1.0),
              u.integrate(sq, Region::large, 1.0), 1e-12);
}

}  // namespace
}  // namespace sio
