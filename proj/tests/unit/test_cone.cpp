#include <algorithm>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "funnel/cone.hpp"

using namespace funnel;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Extreme rays of a pointed cone {A x <= 0}: null vectors of every
// (n-1)-row subset of rank n-1 that satisfy all constraints.
std::vector<VectorXd> enumerate_rays(const MatrixXd& A) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  std::vector<VectorXd> out;
  std::vector<int> idx(n - 1);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n - 1) {
      MatrixXd M(n - 1, n);
      for (int i = 0; i < n - 1; ++i) M.row(i) = A.row(idx[i]);
      Eigen::FullPivLU<MatrixXd> lu(M);
      if (lu.rank() != n - 1) return;
      VectorXd v = lu.kernel().col(0).normalized();
      for (double s : {1.0, -1.0}) {
        const VectorXd d = s * v;
        if ((A * d).maxCoeff() <= 1e-9) {
          const bool seen = std::any_of(out.begin(), out.end(), [&](const VectorXd& o) { return (o - d).norm() < 1e-7; });
          if (!seen) out.push_back(d);
        }
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

bool same_set(const std::vector<VectorXd>& a, const std::vector<VectorXd>& b) {
  if (a.size() != b.size()) return false;
  for (const VectorXd& x : a) {
    if (!std::any_of(b.begin(), b.end(), [&](const VectorXd& y) { return (x - y).norm() < 1e-7; })) return false;
  }
  return true;
}

}  // namespace

TEST(DoubleDescription, MatchesEnumerationOnPointedCones) {
  std::mt19937_64 eng(33);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {3, 4, 5}) {
    for (int trial = 0; trial < 30; ++trial) {
      const int extra = 2 + trial % 5;
      MatrixXd A(n + extra, n);
      // -x_i <= 0 keeps the cone inside the orthant, hence pointed
      A.topRows(n) = -MatrixXd::Identity(n, n);
      for (int i = 0; i < extra; ++i) {
        for (int k = 0; k < n; ++k) A(n + i, k) = g(eng);
      }
      const PolyCone cone = cone_from_hform(n, A);
      const auto oracle = enumerate_rays(A);
      EXPECT_TRUE(cone.lineality.empty());
      EXPECT_TRUE(same_set(cone.rays, oracle)) << "n " << n << " trial " << trial << ": " << cone.rays.size()
                                               << " vs " << oracle.size();
      const int span = oracle.empty() ? 0 : numeric_rank([&] {
        MatrixXd R(n, oracle.size());
        for (std::size_t j = 0; j < oracle.size(); ++j) R.col(static_cast<Eigen::Index>(j)) = oracle[j];
        return R;
      }());
      EXPECT_EQ(cone.span_dim, span);
    }
  }
}

TEST(DoubleDescription, LinealityAndRoundTrip) {
  MatrixXd A(2, 3);
  A << 0, -1, 0, 0, 0, -1;  // y >= 0, z >= 0, x free
  const PolyCone c = cone_from_hform(3, A);
  ASSERT_EQ(c.lineality.size(), 1u);
  EXPECT_NEAR(std::abs(c.lineality[0][0]), 1.0, 1e-12);
  EXPECT_EQ(c.rays.size(), 2u);
  EXPECT_EQ(c.span_dim, 3);

  const PolyCone back = cone_from_generators(3, c.rays, c.lineality);
  for (const VectorXd& r : c.rays) EXPECT_TRUE(back.contains(r));
  EXPECT_TRUE(back.contains(-c.lineality[0]));
  VectorXd out(3);
  out << 0, -1, 0;
  EXPECT_FALSE(back.contains(out));

  const PolyCone whole = cone_from_hform(3, MatrixXd(0, 3));
  EXPECT_EQ(whole.lineality.size(), 3u);
  MatrixXd Z(6, 3);
  Z << MatrixXd::Identity(3, 3), -MatrixXd::Identity(3, 3);
  EXPECT_EQ(cone_from_hform(3, Z).span_dim, 0);
}

TEST(LinearAlgebraHelpers, ComplementIsOrthonormal) {
  std::vector<VectorXd> vs{VectorXd::Unit(4, 0) + VectorXd::Unit(4, 1), VectorXd::Unit(4, 1)};
  const auto B = orthonormal_basis(4, vs);
  const auto C = orthogonal_complement(4, vs);
  ASSERT_EQ(B.size(), 2u);
  ASSERT_EQ(C.size(), 2u);
  for (const auto& b : B) {
    for (const auto& c : C) EXPECT_NEAR(b.dot(c), 0.0, 1e-12);
  }
  for (const auto& c : C) EXPECT_NEAR(c.norm(), 1.0, 1e-12);
}
