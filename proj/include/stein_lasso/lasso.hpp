#pragma once

#include <cstdint>
#include <vector>

#include "stein_lasso/error.hpp"
#include "stein_lasso/linalg.hpp"

namespace stein {

// The LASSO objective throughout is the unscaled
//     (y - X b)'(y - X b) + lambda * sum_j |b_j|,
// so the coordinatewise threshold is lambda / 2 and the smallest lambda with
// an all-zero solution is 2 * max_j |X_j' y|.

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

/// Closed-form solution when X'X is the identity: soft-threshold each
/// least-squares coefficient at lambda / 2.
Vector lasso_orthogonal(const Vector& beta_ols, double lambda);

enum class LassoPath { Auto, Gram, Residual };

struct LassoOptions {
  double tol = 1e-8;
  int max_sweeps = 10000;
  // Auto picks Gram (covariance) updates for p <= 200, residual updates above.
  LassoPath path = LassoPath::Auto;
  bool record_objective = false;
};

struct LassoFit {
  Vector coefficients;
  double lambda = 0.0;
  int iterations = 0;
  bool converged = false;
  // Objective after each sweep, filled when LassoOptions::record_objective.
  std::vector<double> objective_trace;
};

class DidNotConverge : public Error {
 public:
  explicit DidNotConverge(LassoFit best)
      : Error(ErrorCode::DidNotConverge, "coordinate descent hit the sweep limit at lambda=" +
                                             std::to_string(best.lambda)),
        best_(std::move(best)) {}

  const LassoFit& best() const noexcept { return best_; }

 private:
  LassoFit best_;
};

/// Sufficient statistics of a centered least-squares problem; lets repeated
/// fits along a lambda grid share one X'X.
struct GramProblem {
  Matrix gram;  // X'X
  Vector xty;   // X'y
  double yty = 0.0;

  static GramProblem from_data(const Matrix& X, const Vector& y);
};

double lasso_objective(const Matrix& X, const Vector& y, const Vector& beta, double lambda);

/// Cyclic coordinate descent. X and y are expected centered. Every few sweeps
/// the current support is polished by an exact solve, kept only if it passes
/// the optimality conditions; this rescues badly conditioned designs. Throws
/// DidNotConverge (carrying the last iterate) after max_sweeps sweeps.
LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda, const LassoOptions& options = {},
                   const Vector* warm_start = nullptr);

LassoFit lasso_fit(const GramProblem& problem, double lambda, const LassoOptions& options = {},
                   const Vector* warm_start = nullptr);

struct LambdaGrid {
  std::vector<double> values;  // strictly descending
};

LambdaGrid make_lambda_grid(const Matrix& X, const Vector& y, int n_values = 100,
                            double ratio = 1e-4);

struct CvSelection {
  double lambda = 0.0;
  std::size_t index = 0;         // position of lambda in the grid
  std::vector<double> cv_error;  // mean squared out-of-fold error per grid value
  LassoFit fit;                  // refit on the full data at lambda
};

/// K-fold selection of lambda by mean out-of-fold squared error, ties going
/// to the larger lambda. Each training split is re-centered, and grid values
/// are rescaled by n_train / n so the per-observation penalty matches the
/// full-data fit.
CvSelection lasso_cv_select(const Matrix& X, const Vector& y, std::size_t K, const LambdaGrid& grid,
                            std::uint64_t seed, const LassoOptions& options = {});

}  // namespace stein
