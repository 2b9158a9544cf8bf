#include <gtest/gtest.h>

#include "sio/errors.hpp"
#include "sio/measure_repr.hpp"

namespace sio {
namespace {

TEST(Interval, LengthAndMembership) {
  const Interval i{1.0, 3.0};
  EXPECT_EQ(i.length(), 2.0);
  EXPECT_TRUE(i.contains(1.0));
  EXPECT_FALSE(i.contains(3.0));
  EXPECT_TRUE((Interval{2.0, 2.0}).empty());
  EXPECT_EQ((Interval{3.0, 1.0}).length(), 0.0);
}

TEST(CellUnion, MergesTouchingAndOverlappingPieces) {
  const CellUnion u({{2.0, 3.0}, {0.0, 1.0}, {1.0, 1.5}, {2.5, 4.0}, {5.0, 5.0}});
  ASSERT_EQ(u.intervals().size(), 2u);
  EXPECT_EQ(u.intervals()[0], (Interval{0.0, 1.5}));
  EXPECT_EQ(u.intervals()[1], (Interval{2.0, 4.0}));
  EXPECT_DOUBLE_EQ(u.lebesgue(), 3.5);
  EXPECT_EQ(u.hull(), (Interval{0.0, 4.0}));
}

TEST(CellUnion, ReflectionAndShift) {
  const CellUnion u({{0.0, 1.0}, {2.0, 3.0}});
  const CellUnion r = u.reflected(1.0);
  ASSERT_EQ(r.intervals().size(), 2u);
  EXPECT_EQ(r.intervals()[0], (Interval{-2.0, -1.0}));
  EXPECT_EQ(r.intervals()[1], (Interval{0.0, 1.0}));
  EXPECT_EQ(u.shifted(0.5).intervals()[0], (Interval{0.5, 1.5}));
}

TEST(MeasureRepr, CellMassIsProRata) {
  const MeasureRepr m = MeasureRepr::uniform({-2.0, 2.0}, 0.5);
  EXPECT_DOUBLE_EQ(m.mass(Interval{0.0, 1.0}), 0.5);
  EXPECT_DOUBLE_EQ(m.total(), 2.0);
  EXPECT_DOUBLE_EQ(m.mass(CellUnion({{-2.0, -1.0}, {1.0, 2.0}})), 1.0);
}

TEST(MeasureRepr, AtomsFollowTheLeftClosedConvention) {
  const MeasureRepr m({0.0, 4.0}, {}, {{1.0, 2.0}, {3.0, 1.0}});
  EXPECT_EQ(m.mass(Interval{1.0, 3.0}), 2.0);
  EXPECT_EQ(m.mass(Interval{0.0, 1.0}), 0.0);
  EXPECT_EQ(m.mass(Interval{3.0, 4.0}), 1.0);
}

TEST(MeasureRepr, QueriesOutsideTheWindowThrow) {
  const MeasureRepr m = MeasureRepr::uniform({0.0, 1.0}, 1.0);
  EXPECT_THROW(m.mass(Interval{0.5, 1.5}), WindowError);
  EXPECT_EQ(m.mass(Interval{5.0, 5.0}), 0.0);
}

TEST(MeasureRepr, PositiveMeasuresRejectNegativeMass) {
  EXPECT_THROW(MeasureRepr({0.0, 1.0}, {{0.0, 1.0, -1.0}}), DomainError);
  EXPECT_NO_THROW(MeasureRepr({0.0, 1.0}, {{0.0, 1.0, -1.0}}, {}, MeasureRepr::Sign::signed_masses));
}

TEST(MeasureRepr, CumulativeIsAnchoredAtTheOrigin) {
  const MeasureRepr m = MeasureRepr::piecewise_density({-2.0, 0.0, 2.0}, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(m.cumulative(1.0), 3.0);
  EXPECT_DOUBLE_EQ(m.cumulative(-1.0), -1.0);
  EXPECT_EQ(m.cumulative(0.0), 0.0);
}

TEST(MeasureRepr, ImageMeasures) {
  const MeasureRepr m = MeasureRepr::piecewise_density({0.0, 1.0, 3.0}, {1.0, 2.0});
  // reflected(t)(B) = m(t - B)
  const MeasureRepr r = m.reflected(1.0);
  EXPECT_DOUBLE_EQ(r.mass(Interval{-2.0, 0.0}), m.mass(Interval{1.0, 3.0}));
  const MeasureRepr s = m.shifted(2.0);
  EXPECT_DOUBLE_EQ(s.mass(Interval{2.0, 3.0}), 1.0);
  EXPECT_DOUBLE_EQ(m.scaled(3.0).total(), 15.0);
  EXPECT_TRUE(m.scaled(-1.0).is_signed());
}

TEST(MeasureRepr, SumOnCommonRefinement) {
  const MeasureRepr a = MeasureRepr::uniform({0.0, 2.0}, 1.0);
  const MeasureRepr b = MeasureRepr::piecewise_density({1.0, 3.0}, {2.0});
  const MeasureRepr c = a + b;
  EXPECT_DOUBLE_EQ(c.total(), 6.0);
  EXPECT_DOUBLE_EQ(c.mass(Interval{1.0, 2.0}), 3.0);
  EXPECT_EQ(c.window(), (Interval{0.0, 3.0}));
}

}  // namespace
}  // namespace sio
