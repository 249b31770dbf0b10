#pragma once

#include <vector>

#include <Eigen/Dense>

namespace funnel {

/// Polyhedral cone {x : A x <= 0} together with its generators.
struct PolyCone {
  Eigen::MatrixXd A;                     // m x n, possibly m = 0
  std::vector<Eigen::VectorXd> rays;     // unit extreme rays, orthogonal to the lineality space
  std::vector<Eigen::VectorXd> lineality;  // orthonormal basis of {A x = 0}
  int span_dim = 0;

  int dim() const noexcept { return static_cast<int>(A.cols()); }
  bool contains(const Eigen::VectorXd& d, double tol = 1e-9) const;
};

/// Generators of {x in R^n : A x <= 0} by double description (Motzkin).
PolyCone cone_from_hform(int n, const Eigen::MatrixXd& A);

/// cone(rays) + span(lines) in H-form, with canonical generators.
PolyCone cone_from_generators(int n, const std::vector<Eigen::VectorXd>& rays,
                              const std::vector<Eigen::VectorXd>& lines);

/// Numerical rank with a relative threshold.
int numeric_rank(const Eigen::MatrixXd& M, double tol = 1e-9);

/// Orthonormal basis (as vectors) of the span of the given vectors.
std::vector<Eigen::VectorXd> orthonormal_basis(int n, const std::vector<Eigen::VectorXd>& vs,
                                               double tol = 1e-9);

/// Orthonormal basis of the orthogonal complement of span(vs) in R^n.
std::vector<Eigen::VectorXd> orthogonal_complement(int n, const std::vector<Eigen::VectorXd>& vs,
                                                   double tol = 1e-9);

}  // namespace funnel
