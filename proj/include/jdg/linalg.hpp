#pragma once

#include <Eigen/Dense>

namespace jdg {

// State dimensions in this engine are tiny (d, m <= 2 for every shipped
// model); fixed max-size Eigen types keep everything on the stack.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline Mat identity(int d) { return Mat::Identity(d, d); }

// Minimal-norm right inverse R = X^T (X X^T)^{-1}; X R = I requires X X^T
// invertible (uniform ellipticity along the path).
inline bool right_inverse(const Mat& x, Mat& r) {
  const Mat a = x * x.transpose();
  Eigen::FullPivLU<Mat> lu(a);
  if (!lu.isInvertible()) return false;
  r = x.transpose() * lu.inverse();
  return true;
}

// Smallest eigenvalue of a symmetric PSD matrix (d <= kMaxDim).
inline double min_eigenvalue_sym(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace jdg
