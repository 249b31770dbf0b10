#pragma once

#include <Eigen/Dense>

namespace funnel {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

/// maximize c.x subject to A_ub x <= b_ub and A_eq x = b_eq with x free.
/// Dense two-phase simplex with Bland's rule; meant for small problems.
LpResult linprog(const Eigen::VectorXd& c, const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq);

}  // namespace funnel
