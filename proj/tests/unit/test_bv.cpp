#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rsint/bv.hpp"
#include "rsint/counterexample.hpp"
#include "rsint/properties.hpp"

using namespace rsint;

namespace {

const Interval unit(0.0, 1.0);

StepFunction brick(double lo, double hi) { return StepFunction::indicator(unit, lo, hi); }

}  // namespace

TEST(Interval, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Interval(1.0, 1.0), DomainError);
  EXPECT_THROW(Interval(2.0, 1.0), DomainError);
  EXPECT_THROW(Interval(0.0, INFINITY), DomainError);
  EXPECT_DOUBLE_EQ(Interval(-1.0, 2.0).length(), 3.0);
}

TEST(StepFunction, RightContinuousBrick) {
  const auto g = brick(0.5, 1.0);
  EXPECT_EQ(g(0.5), 1.0);
  EXPECT_EQ(g(0.49), 0.0);
  EXPECT_EQ(g(1.0), 0.0);
  EXPECT_EQ(g.left_limit(0.5), 0.0);
  EXPECT_EQ(g.left_limit(1.0), 1.0);
  EXPECT_EQ(g.right_limit(0.5), 1.0);
}

TEST(StepFunction, CanonicalFormDropsEqualPieces) {
  const StepFunction s(unit, {0.2, 0.4, 0.6}, {0.0, 1.0, 1.0, 0.0}, 0.0);
  const StepFunction t(unit, {0.2, 0.6}, {0.0, 1.0, 0.0}, 0.0);
  EXPECT_EQ(s, t);
  EXPECT_EQ(s.breakpoints().size(), 2U);
}

TEST(StepFunction, RejectsInvalidData) {
  EXPECT_THROW(StepFunction(unit, {0.5, 0.4}, {0, 1, 2}, 2), SpecError);
  EXPECT_THROW(StepFunction(unit, {0.5}, {0}, 0), SpecError);
  EXPECT_THROW(StepFunction(unit, {1.5}, {0, 1}, 1), SpecError);
  EXPECT_THROW(StepFunction(unit, {0.5}, {0, NAN}, 0), SpecError);
}

TEST(StepFunction, EvaluationOutsideDomainThrows) {
  const auto g = brick(0.5, 1.0);
  EXPECT_THROW(g(1.5), DomainError);
  EXPECT_THROW(g.left_limit(0.0), DomainError);
  EXPECT_THROW(g.right_limit(1.0), DomainError);
}

TEST(StepFunction, JumpsSortedWithEndpoint) {
  const auto g = brick(0.3, 0.6);
  const auto js = g.jumps(0.0, 1.0);
  ASSERT_EQ(js.size(), 2U);
  EXPECT_EQ(js[0].point, 0.3);
  EXPECT_EQ(js[0].size, 1.0);
  EXPECT_EQ(js[1].point, 0.6);
  EXPECT_EQ(js[1].size, -1.0);

  const auto h = brick(0.5, 1.0);
  const auto hj = h.jumps(0.0, 1.0);
  ASSERT_EQ(hj.size(), 2U);
  EXPECT_EQ(hj[1].point, 1.0);
  EXPECT_EQ(hj[1].size, -1.0);
}

TEST(StepFunction, TotalVariation) {
  const auto g = brick(0.3, 0.6);
  EXPECT_DOUBLE_EQ(g.total_variation(0.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(g.total_variation(0.4, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(g.total_variation(0.0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(g.total_variation(0.3, 1.0), 1.0);
}

TEST(StepFunction, IntegralOfPieces) {
  const auto g = brick(0.25, 0.75).scaled(2.0);
  EXPECT_DOUBLE_EQ(g.integral(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(g.integral(0.5, 1.0), 0.5);
}

TEST(StepFunction, RestrictedBelowKeepsLeftPart) {
  const auto g = brick(0.2, 0.4) + brick(0.6, 0.8);
  const auto r = g.restricted_below(0.5);
  EXPECT_EQ(r, brick(0.2, 0.4));
  EXPECT_EQ(g.restricted_below(0.7)(0.7), 0.0);
  EXPECT_EQ(g.restricted_below(0.7)(0.65), 1.0);
}

TEST(StepFunction, FromJumpsAccumulates) {
  const auto s = StepFunction::from_jumps(unit, 0.0, {{0.6, -1.0}, {0.3, 1.0}, {1.0, 0.5}});
  EXPECT_EQ(s(0.3), 1.0);
  EXPECT_EQ(s(0.6), 0.0);
  EXPECT_EQ(s(1.0), 0.5);
  EXPECT_THROW(StepFunction::from_jumps(unit, 0.0, {{0.0, 1.0}}), SpecError);
}

TEST(PiecewiseLinear, Interpolation) {
  const PiecewiseLinear g({{0.0, 0.0}, {1.0, 2.0}});
  EXPECT_DOUBLE_EQ(g(0.25), 0.5);
  const PiecewiseLinear v({{0.0, 0.5}, {0.5, 0.0}, {1.0, 0.5}});
  EXPECT_DOUBLE_EQ(v.total_variation(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(v.total_variation(0.25, 0.75), 0.5);
  EXPECT_DOUBLE_EQ(v.integral(0.0, 1.0), 0.25);
  EXPECT_THROW(PiecewiseLinear({{0.0, 0.0}}), SpecError);
  EXPECT_THROW(PiecewiseLinear({{0.0, 0.0}, {0.0, 1.0}}), SpecError);
}

TEST(PiecewiseLinear, ContinuousLimits) {
  const PiecewiseLinear g({{0.0, 0.0}, {0.3, 1.0}, {1.0, -1.0}});
  const BVFunction b(g);
  for (double x : {0.1, 0.3, 0.7}) {
    EXPECT_EQ(b.left_limit(x), b(x));
    EXPECT_EQ(b.right_limit(x), b(x));
  }
}

TEST(BVFunction, PartsMustShareInterval) {
  EXPECT_THROW(BVFunction(StepFunction::zero(unit), PiecewiseLinear::zero(Interval(0.0, 2.0))),
               SpecError);
}

TEST(Jordan, OneUpOneDown) {
  const BVFunction g(brick(0.3, 0.6));
  const auto jp = jordan_decompose(g);
  const auto pj = jp.pos.jumps(0.0, 1.0);
  const auto nj = jp.neg.jumps(0.0, 1.0);
  ASSERT_EQ(pj.size(), 1U);
  ASSERT_EQ(nj.size(), 1U);
  EXPECT_EQ(pj[0].point, 0.3);
  EXPECT_EQ(nj[0].point, 0.6);
  EXPECT_EQ(jp.pos(1.0) + jp.neg(1.0), 2.0);
}

TEST(Jordan, NonDecreasingHasNoNegativePart) {
  const BVFunction g(StepFunction(unit, {0.2, 0.5}, {0.0, 0.1, 0.3}, 0.3),
                     PiecewiseLinear({{0.0, 0.0}, {1.0, 1.0}}));
  const auto jp = jordan_decompose(g);
  EXPECT_TRUE(jp.neg.is_zero());
  for (double x : {0.0, 0.2, 0.4, 0.9, 1.0}) EXPECT_DOUBLE_EQ(jp.pos(x), g(x) - g(0.0));
}

TEST(Jordan, SlopeSignSplit) {
  const BVFunction g(PiecewiseLinear({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.25}}));
  const auto jp = jordan_decompose(g);
  EXPECT_DOUBLE_EQ(jp.pos(0.5), 1.0);
  EXPECT_DOUBLE_EQ(jp.pos(1.0), 1.0);
  EXPECT_DOUBLE_EQ(jp.neg(0.5), 0.0);
  EXPECT_DOUBLE_EQ(jp.neg(1.0), 0.75);
  EXPECT_DOUBLE_EQ(g.total_variation(0.0, 1.0), 1.75);
}

TEST(Jordan, NonnegativityCriterion) {
  InstanceGenerator gen(7);
  for (int i = 0; i < 50; ++i) {
    const BVFunction g(gen.step(unit, -0.5, 1.0));
    const BVFunction g0 = g - BVFunction(StepFunction::constant(unit, g(0.0)));
    const auto jp = jordan_decompose(g0);
    bool nonneg = true;
    bool criterion = true;
    for (double x : g0.structural_points()) {
      nonneg = nonneg && g0(x) >= 0.0;
      criterion = criterion && jp.pos(x) >= jp.neg(x);
    }
    EXPECT_EQ(nonneg, criterion);
  }
}

TEST(Jordan, BrickSumJumps) {
  const auto ex = example1_family(0.5);
  const auto h = build_h(ex.family, 1.0, 2);
  const auto js = h.jumps(0.0, 1.0);
  ASSERT_EQ(js.size(), 4U);
  const double lo1 = 2.0 / (3.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(js[0].point, ex.family.lower(2));
  EXPECT_DOUBLE_EQ(js[0].size, 0.5);
  EXPECT_DOUBLE_EQ(js[1].size, -0.5);
  EXPECT_DOUBLE_EQ(js[2].point, lo1);
  EXPECT_DOUBLE_EQ(js[2].size, 1.0);
  EXPECT_DOUBLE_EQ(js[3].point, 2.0 / std::numbers::pi);
  EXPECT_DOUBLE_EQ(js[3].size, -1.0);
}

TEST(TotalVariation, AdditiveAtRandomSplits) {
  const auto rep = jordan_property(11, 100, 100);
  EXPECT_TRUE(rep.passed()) << rep.first_failure;
}

TEST(Product, JumpsCarryIntegrandValue) {
  const PiecewiseLinear f({{0.0, 1.0}, {1.0, 3.0}});
  const auto u = product(f, brick(0.5, 1.0));
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_NEAR(u(x), f(x) * brick(0.5, 1.0)(x), 1e-15);
  EXPECT_NEAR(u.left_limit(1.0), f(1.0), 1e-15);
}
