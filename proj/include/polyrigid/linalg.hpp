#pragma once

#include <Eigen/Dense>

namespace polyrigid {

/// Singular values, numerical rank and orthonormal kernels of a dense matrix.
/// Singular values at or below rank_tol * (largest singular value) count as
/// zero.
struct SvdSummary {
  Eigen::VectorXd singular_values;  // descending
  int rank = 0;
  Eigen::MatrixXd right_null;  // cols x (cols - rank), orthonormal columns
  Eigen::MatrixXd left_null;   // rows x (rows - rank), orthonormal columns
};

SvdSummary analyze_matrix(const Eigen::MatrixXd& a, double rank_tol);

int numerical_rank(const Eigen::MatrixXd& a, double rank_tol);

/// Orthonormal basis of {x : a x = 0}.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rank_tol);

/// Largest |G - I| entry of the Gram matrix of the columns.
double orthonormality_residual(const Eigen::MatrixXd& basis);

}  // namespace polyrigid
