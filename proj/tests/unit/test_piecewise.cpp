#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "funnel/error.hpp"
#include "funnel/piecewise.hpp"

using namespace funnel;

TEST(GridFunction, InterpolatesAndValidates) {
  GridFunction f({0.0, 1.0, 3.0}, {0.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(f(0.5), 1.0);
  EXPECT_DOUBLE_EQ(f(2.0), 2.5);
  EXPECT_DOUBLE_EQ(f(3.0), 3.0);
  EXPECT_EQ(f.floor_index(1.0), 1u);
  EXPECT_EQ(f.floor_index(2.9), 1u);
  EXPECT_THROW(f(-1e-9), Error);
  EXPECT_THROW(f(3.1), Error);
  EXPECT_THROW(GridFunction({0.0, 1.0}, {1.0, 2.0}), Error);
  EXPECT_THROW(GridFunction({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), Error);
  EXPECT_THROW(GridFunction({0.0, 1.0}, {0.0, -1.0}), Error);
}

TEST(PiecewiseAffine, EvaluatesSlopes) {
  PiecewiseAffine f({0.0, 1.0, 2.0, 4.0}, {1.0, 3.0, 4.0, 4.0});
  EXPECT_DOUBLE_EQ(f(0.5), 2.0);
  EXPECT_DOUBLE_EQ(f.right_slope(1.0), 1.0);
  EXPECT_DOUBLE_EQ(f.left_slope(1.0), 2.0);
  EXPECT_DOUBLE_EQ(f.right_slope(3.0), 0.0);
  EXPECT_TRUE(f.is_concave());
  EXPECT_FALSE(PiecewiseAffine({0.0, 1.0, 2.0}, {0.0, 0.0, 1.0}).is_concave());
  EXPECT_THROW(f(4.5), Error);
  EXPECT_THROW(f.right_slope(4.0), Error);
  EXPECT_DOUBLE_EQ(f.scaled(-2.0)(0.5), -4.0);
}

// Simpson's rule on each piece clipped to [lo, hi] is exact for affine
// integrands and shares no code with the cumulative-trapezoid integral.
TEST(PiecewiseAffine, IntegralMatchesPiecewiseSimpson) {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs{0.0}, ys{u(eng)};
  for (int i = 0; i < 40; ++i) {
    xs.push_back(xs.back() + 0.05 + u(eng));
    ys.push_back(u(eng) * 5.0 - 2.0);
  }
  PiecewiseAffine f(xs, ys);
  for (int trial = 0; trial < 200; ++trial) {
    double lo = u(eng) * xs.back(), hi = u(eng) * xs.back();
    if (lo > hi) std::swap(lo, hi);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double a = std::max(lo, xs[i]), b = std::min(hi, xs[i + 1]);
      if (b <= a) continue;
      s += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
    }
    EXPECT_NEAR(f.integral(lo, hi), s, 1e-11 * std::max(1.0, std::abs(s)));
  }
  EXPECT_DOUBLE_EQ(f.integral(2.0, 2.0), 0.0);
  EXPECT_THROW(f.integral(2.0, 1.0), Error);
}
