#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sio/errors.hpp"
#include "sio/measures.hpp"

namespace sio {
namespace {

constexpr double kPi = std::numbers::pi;

ChannelSpec base_spec() {
  ChannelSpec s;
  s.window = {1.0, 3.0};
  s.variance = MeasureRepr::zero({-3.0, 3.0});
  s.intensity = MeasureRepr::zero({-3.0, 3.0});
  s.rc = {CorrFn::Kind::exponential, 1.0};
  s.rj = {CorrFn::Kind::exponential, 0.5};
  return s;
}

ChannelSpec mixed_spec() {
  ChannelSpec s = base_spec();
  s.variance = MeasureRepr::piecewise_density({-3.0, 0.0, 3.0}, {0.5, 1.0});
  s.intensity = MeasureRepr::piecewise_density({-3.0, -1.0, 3.0}, {1.0, 2.0});
  s.sizes = SizeDist::gaussian(0.3, 1.0);
  return s;
}

RealizationSet realizations(const ChannelSpec& spec, const char* exp, std::size_t n) {
  return {ChannelSampler(spec, TimeGrid::uniform(-1.0, 1.0, 9), DelayGrid::uniform(-3.0, 3.0, 49)),
          SeedLineage{21, exp, 0, n}, n, worker_count()};
}

TEST(Mu, PureGaussianChannel) {
  ChannelSpec s = base_spec();
  s.variance = MeasureRepr::uniform({-3.0, 3.0}, 1.0);
  const MuParts m = mu_closed_form(s, 0.0, CellUnion::single(0.0, 2.0));
  EXPECT_EQ(m.total, 2.0);
  EXPECT_EQ(m.c, 2.0);
  EXPECT_EQ(m.j, 0.0);
  EXPECT_EQ(m.small, 0.0);
}

TEST(Mu, EmptySetHasNoMass) {
  const MuParts m = mu_closed_form(mixed_spec(), 0.5, CellUnion());
  EXPECT_EQ(m.total, 0.0);
}

TEST(Mu, LargeJumpsOnly) {
  ChannelSpec s = base_spec();
  s.intensity = MeasureRepr::uniform({-3.0, 3.0}, 3.0);
  s.sizes = SizeDist::mixture({-1.0, 1.0}, {0.5, 0.5});
  s.truncation = 0.5;
  const MuParts m = mu_closed_form(s, 0.0, CellUnion::single(0.0, 1.0));
  EXPECT_EQ(m.j, 3.0);
  EXPECT_EQ(m.small, 0.0);
  EXPECT_EQ(m.total, 3.0);
}

TEST(Mu, IsAdditiveOverDisjointSets) {
  const auto s = mixed_spec();
  const CellUnion a = CellUnion::single(-1.0, 0.5);
  const CellUnion b = CellUnion::single(1.0, 1.75);
  const CellUnion ab({{-1.0, 0.5}, {1.0, 1.75}});
  EXPECT_NEAR(mu_closed_form(s, 0.25, ab).total,
              mu_closed_form(s, 0.25, a).total + mu_closed_form(s, 0.25, b).total, 1e-12);
}

TEST(Mu, MeasureFormAgreesWithTheSetForm) {
  const auto s = mixed_spec();
  const CellUnion b = CellUnion::single(-0.5, 1.5);
  EXPECT_NEAR(mu_measure(s, 0.5).mass(b), mu_closed_form(s, 0.5, b).total, 1e-12);
}

TEST(MuEmpirical, ZeroChannelGivesZero) {
  const auto e = mu_empirical(realizations(ChannelSpec::zero({1.0, 3.0}), "zero", 1000), 0.0,
                              CellUnion::single(0.0, 1.0));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.se, 0.0);
}

TEST(MuEmpirical, MatchesTheClosedForm) {
  const auto s = mixed_spec();
  const CellUnion b({{-1.0, 0.5}, {1.0, 1.75}});
  const auto e = mu_empirical(realizations(s, "mu", 40000), 0.25, b);
  EXPECT_LE(std::abs(e.value - mu_closed_form(s, 0.25, b).total), 5.0 * e.se);
}

TEST(Rho, EqualTimesGiveMu) {
  const auto s = mixed_spec();
  const CellUnion b = CellUnion::single(-1.25, 0.5);
  for (double t : {-0.5, 0.0, 0.75}) {
    EXPECT_NEAR(rho_closed_form(s, t, t, b).total, mu_closed_form(s, t, b.reflected(t)).total,
                1e-12);
    EXPECT_EQ(rho_closed_form(s, t, t, b).mixing, 0.0);
  }
}

TEST(Rho, ConstantCorrelationIsTimeInvariant) {
  ChannelSpec s = mixed_spec();
  s.rc = {CorrFn::Kind::constant, 1.0};
  s.rj = {CorrFn::Kind::constant, 1.0};
  const CellUnion b = CellUnion::single(-1.0, 1.0);
  const double ref = rho_closed_form(s, 0.0, 0.0, b).total;
  EXPECT_NEAR(rho_closed_form(s, -0.5, 0.5, b).total, ref, 1e-9);
  EXPECT_NEAR(rho_closed_form(s, 0.25, 1.0, b).total, ref, 1e-9);
}

TEST(Rho, GaussianPartDecaysWithTheCorrelation) {
  ChannelSpec s = base_spec();
  s.variance = MeasureRepr::uniform({-3.0, 3.0}, 2.0);
  const CellUnion b = CellUnion::single(0.0, 1.5);
  EXPECT_NEAR(rho_closed_form(s, -0.5, 0.5, b).total, std::exp(-1.0) * 3.0, 1e-12);
}

TEST(Rho, UnitJumpsGiveTheIntensity) {
  ChannelSpec s = base_spec();
  s.intensity = MeasureRepr::uniform({-3.0, 3.0}, 2.0);
  s.sizes = SizeDist::point(1.0);
  s.truncation = 0.5;
  const CellUnion b({{-2.0, -1.0}, {0.0, 0.5}});
  EXPECT_DOUBLE_EQ(rho_closed_form(s, -1.0, 0.5, b).total, 3.0);
  EXPECT_DOUBLE_EQ(rho_closed_form(s, 0.0, 0.0, b).total, 3.0);
}

TEST(RhoEmpirical, EqualTimesAgreeWithMuEmpirical) {
  const auto s = mixed_spec();
  const auto reals = realizations(s, "rho", 2000);
  const CellUnion b = CellUnion::single(-1.25, 0.5);
  const double t = 0.5;
  const auto r = rho_empirical(reals, t, t, b);
  const auto m = mu_empirical(reals, t, b.reflected(t));
  EXPECT_NEAR(r.direct.value, m.value, 1e-12 * m.value);
}

TEST(RhoEmpirical, MatchesTheClosedForm) {
  const auto s = mixed_spec();
  const CellUnion b = CellUnion::single(-1.0, 1.0);
  const auto r = rho_empirical(realizations(s, "rho-cf", 40000), -0.5, 0.5, b);
  EXPECT_LE(std::abs(r.direct.value - rho_closed_form(s, -0.5, 0.5, b).total), 5.0 * r.direct.se);
}

RhoProvider constant_rho(double c) {
  return {[c](double, double, const CellUnion&) { return c; },
          [c](double, const CellUnion&) { return c; }};
}

TEST(Scattering, ConstantCorrelationAtZeroFrequency) {
  const CellUnion b = CellUnion::single(0.0, 1.0);
  const auto p = constant_rho(1.5);
  const auto direct = scattering_eval_direct(p, 0.0, 0.0, b, 0.5, 1.0, 65);
  const auto fast = scattering_eval_stationary(p, 0.0, 0.0, b, 0.5, 1.0, 65);
  EXPECT_NEAR(std::abs(direct.value - 4.0 * 0.5 * 1.0 * 1.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(fast.value - 4.0 * 0.5 * 1.0 * 1.5), 0.0, 1e-12);
}

TEST(Scattering, ConstantCorrelationFactorisesIntoSincs) {
  const CellUnion b = CellUnion::single(0.0, 1.0);
  const double S = 1.0, T = 1.0, g = 0.3, gt = 0.7;
  // \int_{-T}^{T} e^{-2 pi i t g} dt = sin(2 pi T g) / (pi g)
  const double ref =
      (std::sin(2.0 * kPi * S * gt) / (kPi * gt)) * (std::sin(2.0 * kPi * T * g) / (kPi * g));
  const auto v = scattering_eval(constant_rho(1.0), g, gt, b, S, T, 2001).value;
  EXPECT_NEAR(v.real(), ref, 1e-4);
  EXPECT_NEAR(v.imag(), 0.0, 1e-12);
}

TEST(Scattering, FastPathMatchesTheDirectSum) {
  const auto s = mixed_spec();
  const RhoModel model(s);
  const RhoProvider p{
      [&](double a, double t, const CellUnion& b) { return model(a, t, b).total; },
      [&](double tau, const CellUnion& b) { return model(0.0, tau, b).total; }};
  const CellUnion b = CellUnion::single(-1.0, 1.0);
  for (auto [g, gt, S] : {std::tuple{0.0, 0.0, 1.0}, {0.5, 0.25, 1.0}, {1.0, -0.5, 0.5}}) {
    const auto d = scattering_eval_direct(p, g, gt, b, S, 1.0, 129).value;
    const auto f = scattering_eval_stationary(p, g, gt, b, S, 1.0, 129).value;
    EXPECT_LE(std::abs(d - f), 1e-6 * std::max(1.0, std::abs(d)));
  }
}

TEST(Scattering, RejectsBadGrids) {
  const auto p = constant_rho(1.0);
  const CellUnion b = CellUnion::single(0.0, 1.0);
  EXPECT_THROW(scattering_eval_direct(p, 0.0, 0.0, b, 1.0, 1.0, 10), DomainError);
  EXPECT_THROW(scattering_eval_stationary(p, 0.0, 0.0, b, 0.3, 1.0, 64), DomainError);
  EXPECT_THROW(scattering_eval_stationary({constant_rho(1.0).rho, {}}, 0.0, 0.0, b, 1.0, 1.0, 65),
               DomainError);
}

TEST(Convolution, AtomsShiftAndScale) {
  const MeasureRepr mu = MeasureRepr::uniform({-2.0, 2.0}, 1.0);
  const MeasureRepr nu({0.0, 2.0}, {}, {{0.5, 1.0}, {1.0, 2.0}});
  const MeasureRepr c = convolve_measures(mu, nu);
  EXPECT_DOUBLE_EQ(c.total(), 12.0);
  EXPECT_DOUBLE_EQ(c.mass(Interval{0.0, 1.0}), 3.0);
  EXPECT_DOUBLE_EQ(c.mass(Interval{2.5, 3.0}), 1.0);
}

TEST(Convolution, EmptyAtomicMeasureGivesZero) {
  const MeasureRepr mu = MeasureRepr::uniform({-2.0, 2.0}, 1.0);
  EXPECT_TRUE(convolve_measures(mu, MeasureRepr::zero({0.0, 1.0})).is_zero());
}

TEST(Convolution, OnlyAtomicSecondArguments) {
  const MeasureRepr mu = MeasureRepr::uniform({-2.0, 2.0}, 1.0);
  EXPECT_THROW(convolve_measures(mu, MeasureRepr::uniform({0.0, 1.0}, 1.0)),
               UnsupportedRepresentation);
}

TEST(WeightedL2, SumsSquaredCoefficientsAgainstCellMasses) {
  const StepSignal f({0.0, 1.0, 2.0}, {2.0, -1.0});
  const MeasureRepr m = MeasureRepr::piecewise_density({0.0, 1.0, 2.0}, {3.0, 5.0});
  EXPECT_EQ(weighted_l2(f, m), 17.0);
  EXPECT_EQ(weighted_l2(StepSignal::zero(0.0, 1.0), m), 0.0);
}

TEST(WeightedL2, IsShiftInvariant) {
  const StepSignal f({0.0, 1.0, 2.0}, {2.0, -1.0});
  const MeasureRepr m = MeasureRepr::piecewise_density({0.0, 1.0, 2.0}, {3.0, 5.0});
  EXPECT_DOUBLE_EQ(weighted_l2(f.shifted(0.75), m.shifted(0.75)), weighted_l2(f, m));
}

}  // namespace
}  // namespace sio
