#include "polyrigid/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace polyrigid {

SvdSummary analyze_matrix(const Eigen::MatrixXd& a, double rank_tol) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  SvdSummary out;

  if (rows == 0 || cols == 0) {
    out.singular_values.resize(0);
    out.rank = 0;
    out.right_null = Eigen::MatrixXd::Identity(cols, cols);
    out.left_null = Eigen::MatrixXd::Identity(rows, rows);
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double top = out.singular_values.size() > 0 ? out.singular_values(0) : 0.0;
  int rank = 0;
  if (top > 0.0) {
    for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
      if (out.singular_values(k) > rank_tol * top) ++rank;
    }
  }
  out.rank = rank;
  out.right_null = svd.matrixV().rightCols(cols - rank);
  out.left_null = svd.matrixU().rightCols(rows - rank);
  return out;
}

int numerical_rank(const Eigen::MatrixXd& a, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rank_tol * s(0)) ++rank;
  }
  return rank;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rank_tol) {
  return analyze_matrix(a, rank_tol).right_null;
}

double orthonormality_residual(const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return 0.0;
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace polyrigid
