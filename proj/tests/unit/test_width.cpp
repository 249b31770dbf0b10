#include <cmath>

#include <gtest/gtest.h>

#include "funnel/error.hpp"
#include "funnel/width.hpp"

using namespace funnel;

TEST(Width, ClosedForms) {
  EXPECT_DOUBLE_EQ(Width::constant(2.0)(1e9), 2.0);
  EXPECT_DOUBLE_EQ(Width::power_shift(0.5, 1.0)(3.0), 2.0);
  EXPECT_DOUBLE_EQ(Width::affine(0.5, 1.0)(4.0), 3.0);
  EXPECT_THROW(Width::constant(0.0), Error);
  EXPECT_THROW(Width::power_shift(1.0, 1.0), Error);
  EXPECT_THROW(Width::power_shift(0.5, 0.0), Error);
  EXPECT_THROW(Width::affine(-1.0, 1.0), Error);
  EXPECT_THROW(Width::constant(1.0)(-1.0), Error);
}

TEST(Width, PiecewiseExtendsWithLastSlope) {
  const Width w = Width::piecewise(PiecewiseAffine({0.0, 2.0, 4.0}, {1.0, 3.0, 4.0}));
  EXPECT_DOUBLE_EQ(w(1.0), 2.0);
  EXPECT_DOUBLE_EQ(w(6.0), 5.0);
  const Width flat = Width::piecewise(PiecewiseAffine({0.0, 2.0, 4.0}, {1.0, 3.0, 3.0}));
  EXPECT_DOUBLE_EQ(flat(100.0), 3.0);
  EXPECT_THROW(Width::piecewise(PiecewiseAffine({0.0, 1.0, 2.0}, {1.0, 1.5, 2.5})), Error);
  EXPECT_THROW(Width::piecewise(PiecewiseAffine({0.0, 1.0}, {0.0, 1.0})), Error);
  EXPECT_THROW(Width::piecewise(PiecewiseAffine({0.0, 1.0}, {2.0, 1.0})), Error);
  EXPECT_THROW(Width::piecewise(PiecewiseAffine({1.0, 2.0}, {1.0, 1.0})), Error);
}
