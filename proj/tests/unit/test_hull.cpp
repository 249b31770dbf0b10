#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "funnel/hull.hpp"

using namespace funnel;

namespace {

// A point is on the strict upper hull iff no segment between two other
// points passes on or above it. O(N^3), independent of the monotone chain.
std::vector<Point2> brute_upper_hull(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool keep = true;
    for (std::size_t a = 0; a < pts.size() && keep; ++a) {
      for (std::size_t b = a + 1; b < pts.size() && keep; ++b) {
        if (a == i || b == i) continue;
        if (pts[a].x < pts[i].x && pts[i].x < pts[b].x) {
          const double t = (pts[i].x - pts[a].x) / (pts[b].x - pts[a].x);
          const double y = pts[a].y + t * (pts[b].y - pts[a].y);
          if (y >= pts[i].y - 1e-12) keep = false;
        }
      }
    }
    if (keep) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

TEST(UpperHull, MatchesBruteForce) {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> pts;
    double x = 0.0;
    const int n = 3 + trial;
    for (int i = 0; i < n; ++i) {
      x += 0.01 + u(eng);
      pts.push_back({x, std::sqrt(x) + 0.3 * u(eng)});
    }
    const auto fast = upper_hull(pts);
    const auto slow = brute_upper_hull(pts);
    ASSERT_EQ(fast.size(), slow.size()) << "trial " << trial;
    for (std::size_t i = 0; i < fast.size(); ++i) {
      EXPECT_EQ(fast[i].x, slow[i].x);
      EXPECT_EQ(fast[i].y, slow[i].y);
    }
  }
}

TEST(UpperHull, DropsCollinearPoints) {
  std::vector<Point2> pts{{0, 0}, {1, 1}, {2, 2}, {3, 2}};
  const auto h = upper_hull(pts);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[1].x, 2.0);
}

TEST(UpperConcaveEnvelope, MajorizesAndIsConcave) {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs{0.0}, ys{0.0};
  for (int i = 1; i < 300; ++i) {
    xs.push_back(xs.back() + u(eng));
    ys.push_back(std::log1p(xs.back()) * (0.8 + 0.4 * u(eng)));
  }
  GridFunction f(xs, ys);
  const PiecewiseAffine psi = upper_concave_envelope(f);
  EXPECT_TRUE(psi.is_concave());
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_GE(psi(xs[i]), ys[i] - 1e-12);
  for (double b : psi.breakpoints()) EXPECT_NEAR(psi(b), f(b), 1e-12);
}
