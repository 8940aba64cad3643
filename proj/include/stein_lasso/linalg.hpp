#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <string>
#include <utility>

#include "stein_lasso/error.hpp"

namespace stein {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Gram matrix X'X, fully populated.
template <typename Derived>
MatrixX<typename Derived::Scalar> gram(const Eigen::MatrixBase<Derived>& X) {
  using Scalar = typename Derived::Scalar;
  MatrixX<Scalar> C = MatrixX<Scalar>::Zero(X.cols(), X.cols());
  C.template selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  C.template triangularView<Eigen::StrictlyUpper>() = C.transpose();
  return C;
}

/// Solves A x = b for symmetric positive-definite A.
///
/// A pivot (squared diagonal of the Cholesky factor) at or below
/// 1e-12 * trace(A) / dim is reported as NotPositiveDefinite, which is how a
/// singular design surfaces to callers.
template <typename DerivedA, typename DerivedB>
VectorX<typename DerivedA::Scalar> cholesky_solve(const Eigen::MatrixBase<DerivedA>& A,
                                                  const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "cholesky_solve: A is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                    ", b has " + std::to_string(b.size()) + " entries");
  }
  if (n == 0) throw Error(ErrorCode::EmptyMatrix, "cholesky_solve: empty system");

  const Scalar scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale) {
    throw Error(ErrorCode::InvalidArgument, "cholesky_solve: matrix is not symmetric");
  }

  const Scalar floor = Scalar(1e-12) * A.trace() / Scalar(n);
  Eigen::LLT<MatrixX<Scalar>> llt(A);
  if (llt.info() != Eigen::Success || !(floor > Scalar(0))) {
    throw Error(ErrorCode::NotPositiveDefinite, "cholesky_solve: factorization failed");
  }
  const auto L = llt.matrixLLT();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (L(j, j) * L(j, j) <= floor) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "cholesky_solve: pivot " + std::to_string(j) + " below tolerance");
    }
  }
  return llt.solve(b);
}

/// Subtracts each column's mean. Returns the centered matrix and the means.
template <typename Derived>
std::pair<MatrixX<typename Derived::Scalar>, VectorX<typename Derived::Scalar>> center_columns(
    const Eigen::MatrixBase<Derived>& X) {
  if (X.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "center_columns: no rows");
  VectorX<typename Derived::Scalar> means = X.colwise().mean().transpose();
  MatrixX<typename Derived::Scalar> centered = X.rowwise() - means.transpose();
  return {std::move(centered), std::move(means)};
}

/// Lower Cholesky factor of the equicorrelation matrix (1 - r) I + r J.
template <typename Scalar = double>
MatrixX<Scalar> equicorr_cholesky(Eigen::Index p, Scalar r) {
  if (!(r >= Scalar(0) && r < Scalar(1))) {
    throw Error(ErrorCode::InvalidCorrelation, "equicorr_cholesky: r must lie in [0, 1)");
  }
  if (p < 1) throw Error(ErrorCode::InvalidDimension, "equicorr_cholesky: p must be >= 1");
  MatrixX<Scalar> sigma = MatrixX<Scalar>::Constant(p, p, r);
  sigma.diagonal().setOnes();
  Eigen::LLT<MatrixX<Scalar>> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "equicorr_cholesky: factorization failed");
  }
  return llt.matrixL();
}

}  // namespace stein
