#include "funnel/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "funnel/error.hpp"

namespace funnel {

namespace {

constexpr double kEps = 1e-10;

struct Tableau {
  Eigen::MatrixXd T;  // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;
  int m = 0;
  int cols = 0;  // structural + slack + artificial columns

  double& rhs(int i) { return T(i, cols); }

  void pivot(int r, int j) {
    T.row(r) /= T(r, j);
    for (int i = 0; i <= m; ++i) {
      if (i != r && T(i, j) != 0.0) T.row(i) -= T(i, j) * T.row(r);
    }
    basis[static_cast<std::size_t>(r)] = j;
  }

  // Minimizes the objective row over columns [0, allowed). Returns false if unbounded.
  bool run(int allowed) {
    for (int iter = 0; iter < 50000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (T(m, j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > kEps) {
          const double ratio = rhs(i) / T(i, enter);
          if (ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    fail(ErrorKind::InternalConsistency, "simplex iteration limit reached");
  }
};

}  // namespace

LpResult linprog(const Eigen::VectorXd& c, const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq) {
  const int n = static_cast<int>(c.size());
  const int mu = static_cast<int>(A_ub.rows());
  const int me = static_cast<int>(A_eq.rows());
  if ((mu > 0 && A_ub.cols() != n) || (me > 0 && A_eq.cols() != n) || b_ub.size() != mu ||
      b_eq.size() != me) {
    fail(ErrorKind::Domain, "linprog: inconsistent dimensions");
  }
  const int m = mu + me;
  const int nx = 2 * n;  // x = x+ - x-
  const int ns = mu;
  // One artificial per row that cannot start with its slack in the basis.
  std::vector<int> needs_art;
  for (int i = 0; i < mu; ++i) {
    if (b_ub[i] < 0.0) needs_art.push_back(i);
  }
  for (int i = 0; i < me; ++i) needs_art.push_back(mu + i);
  const int na = static_cast<int>(needs_art.size());

  Tableau tb;
  tb.m = m;
  tb.cols = nx + ns + na;
  tb.T = Eigen::MatrixXd::Zero(m + 1, tb.cols + 1);
  tb.basis.assign(static_cast<std::size_t>(m), -1);

  for (int i = 0; i < mu; ++i) {
    const double sgn = b_ub[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tb.T(i, j) = sgn * A_ub(i, j);
      tb.T(i, n + j) = -sgn * A_ub(i, j);
    }
    tb.T(i, nx + i) = sgn;
    tb.rhs(i) = sgn * b_ub[i];
    if (sgn > 0.0) tb.basis[static_cast<std::size_t>(i)] = nx + i;
  }
  for (int i = 0; i < me; ++i) {
    const int r = mu + i;
    const double sgn = b_eq[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tb.T(r, j) = sgn * A_eq(i, j);
      tb.T(r, n + j) = -sgn * A_eq(i, j);
    }
    tb.rhs(r) = sgn * b_eq[i];
  }
  for (int k = 0; k < na; ++k) {
    const int r = needs_art[static_cast<std::size_t>(k)];
    tb.T(r, nx + ns + k) = 1.0;
    tb.basis[static_cast<std::size_t>(r)] = nx + ns + k;
  }

  // Phase 1: minimize the sum of artificials.
  if (na > 0) {
    for (int k = 0; k < na; ++k) tb.T.row(m) -= tb.T.row(needs_art[static_cast<std::size_t>(k)]);
    for (int k = 0; k < na; ++k) tb.T(m, nx + ns + k) = 0.0;
    tb.run(tb.cols);
    const double scale = 1.0 + (na > 0 ? tb.T.col(tb.cols).head(m).cwiseAbs().maxCoeff() : 0.0);
    if (-tb.rhs(m) > 1e-9 * scale) return LpResult{LpStatus::Infeasible, {}, 0.0};
    // Drive remaining artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (tb.basis[static_cast<std::size_t>(i)] < nx + ns) continue;
      for (int j = 0; j < nx + ns; ++j) {
        if (std::abs(tb.T(i, j)) > 1e-9) {
          tb.pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2: minimize -c.x over structural and slack columns.
  tb.T.row(m).setZero();
  for (int j = 0; j < n; ++j) {
    tb.T(m, j) = -c[j];
    tb.T(m, n + j) = c[j];
  }
  for (int i = 0; i < m; ++i) {
    const int bj = tb.basis[static_cast<std::size_t>(i)];
    if (bj < nx + ns && tb.T(m, bj) != 0.0) tb.T.row(m) -= tb.T(m, bj) * tb.T.row(i);
  }
  if (!tb.run(nx + ns)) return LpResult{LpStatus::Unbounded, {}, 0.0};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bj = tb.basis[static_cast<std::size_t>(i)];
    if (bj < n) {
      x[bj] += tb.rhs(i);
    } else if (bj < nx) {
      x[bj - n] -= tb.rhs(i);
    }
  }
  return LpResult{LpStatus::Optimal, x, c.dot(x)};
}

}  // namespace funnel
