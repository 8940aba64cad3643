#include "stein_lasso/lasso.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "stein_lasso/folds.hpp"

namespace stein {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be finite and >= 0");
  }
}

// Exact minimizer for the current support and signs: solves
// C_AA b = g_A - (lambda / 2) s_A, where g = X'y. Accepted only when the
// signs survive and every inactive coordinate meets its KKT bound, in which
// case it is the global optimum. Returns false otherwise.
template <typename GramBlock, typename Gradient>
bool polish_active_set(Vector& beta, double threshold, GramBlock&& gram_block, const Vector& xty,
                       Gradient&& gradient_at) {
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) active.push_back(j);
  }
  if (active.empty()) return false;
  const auto a = static_cast<Eigen::Index>(active.size());
  const Matrix C_aa = gram_block(active);
  Vector rhs(a);
  for (Eigen::Index i = 0; i < a; ++i) {
    rhs(i) = xty(active[i]) - threshold * (beta(active[i]) > 0.0 ? 1.0 : -1.0);
  }
  const Eigen::LDLT<Matrix> ldlt(C_aa);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  const Vector b_a = ldlt.solve(rhs);
  if (!b_a.allFinite()) return false;

  Vector candidate = Vector::Zero(beta.size());
  for (Eigen::Index i = 0; i < a; ++i) {
    if (b_a(i) * beta(active[i]) < 0.0) return false;
    candidate(active[i]) = b_a(i);
  }
  const Vector g = gradient_at(candidate);
  const double slack = threshold * (1.0 + 1e-10) + 1e-12 * xty.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (candidate(j) == 0.0 && std::abs(g(j)) > slack) return false;
  }
  beta = candidate;
  return true;
}

constexpr int kPolishEvery = 10;

Vector initial_beta(Eigen::Index p, const Vector* warm_start) {
  if (warm_start == nullptr) return Vector::Zero(p);
  if (warm_start->size() != p) {
    throw Error(ErrorCode::DimensionMismatch, "warm start has the wrong length");
  }
  return *warm_start;
}

LassoFit fit_residual_path(const Matrix& X, const Vector& y, double lambda,
                           const LassoOptions& options, const Vector* warm_start) {
  const Eigen::Index p = X.cols();
  const double threshold = 0.5 * lambda;
  const Vector col_sq = X.colwise().squaredNorm().transpose();

  LassoFit fit;
  fit.lambda = lambda;
  fit.coefficients = initial_beta(p, warm_start);
  Vector& beta = fit.coefficients;
  Vector residual = y - X * beta;
  Vector xty;

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (col_sq(j) <= 0.0) {
        beta(j) = 0.0;
        continue;
      }
      const double old = beta(j);
      const double z = X.col(j).dot(residual) + col_sq(j) * old;
      const double updated = soft_threshold(z, threshold) / col_sq(j);
      if (updated != old) {
        residual -= (updated - old) * X.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    fit.iterations = sweep;
    if (options.record_objective) {
      fit.objective_trace.push_back(residual.squaredNorm() + lambda * beta.lpNorm<1>());
    }
    const bool done = max_change < options.tol;
    if (done || sweep % kPolishEvery == 0) {
      if (xty.size() == 0) xty = X.transpose() * y;
      const auto block = [&X](const std::vector<Eigen::Index>& idx) {
        const Matrix Xa = X(Eigen::all, idx);
        return Matrix(Xa.transpose() * Xa);
      };
      const auto grad = [&](const Vector& b) { return Vector(X.transpose() * (y - X * b)); };
      if (polish_active_set(beta, threshold, block, xty, grad)) residual = y - X * beta;
    }
    if (done) {
      fit.converged = true;
      return fit;
    }
  }
  throw DidNotConverge(std::move(fit));
}

}  // namespace

Vector lasso_orthogonal(const Vector& beta_ols, double lambda) {
  check_lambda(lambda);
  const double t = 0.5 * lambda;
  return beta_ols.unaryExpr([t](double b) { return soft_threshold(b, t); });
}

GramProblem GramProblem::from_data(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "X has " + std::to_string(X.rows()) +
                                                  " rows but y has " + std::to_string(y.size()));
  }
  return GramProblem{stein::gram(X), X.transpose() * y, y.squaredNorm()};
}

double lasso_objective(const Matrix& X, const Vector& y, const Vector& beta, double lambda) {
  return (y - X * beta).squaredNorm() + lambda * beta.lpNorm<1>();
}

LassoFit lasso_fit(const GramProblem& problem, double lambda, const LassoOptions& options,
                   const Vector* warm_start) {
  check_lambda(lambda);
  const Matrix& C = problem.gram;
  const Eigen::Index p = C.cols();
  const double threshold = 0.5 * lambda;

  LassoFit fit;
  fit.lambda = lambda;
  fit.coefficients = initial_beta(p, warm_start);
  Vector& beta = fit.coefficients;
  // gradient = X'(y - X beta)
  Vector gradient = problem.xty - C * beta;

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double cjj = C(j, j);
      if (cjj <= 0.0) {
        beta(j) = 0.0;
        continue;
      }
      const double old = beta(j);
      const double updated = soft_threshold(gradient(j) + cjj * old, threshold) / cjj;
      if (updated != old) {
        gradient.noalias() -= (updated - old) * C.col(j);
        beta(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    fit.iterations = sweep;
    if (options.record_objective) {
      const double rss = problem.yty - beta.dot(problem.xty) - beta.dot(gradient);
      fit.objective_trace.push_back(rss + lambda * beta.lpNorm<1>());
    }
    const bool done = max_change < options.tol;
    if (done || sweep % kPolishEvery == 0) {
      const auto block = [&C](const std::vector<Eigen::Index>& idx) {
        return Matrix(C(idx, idx));
      };
      const auto grad = [&](const Vector& b) { return Vector(problem.xty - C * b); };
      if (polish_active_set(beta, threshold, block, problem.xty, grad)) {
        gradient = problem.xty - C * beta;
      }
    }
    if (done) {
      fit.converged = true;
      return fit;
    }
  }
  throw DidNotConverge(std::move(fit));
}

LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda, const LassoOptions& options,
                   const Vector* warm_start) {
  if (X.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "X has " + std::to_string(X.rows()) +
                                                  " rows but y has " + std::to_string(y.size()));
  }
  check_lambda(lambda);
  const bool use_gram = options.path == LassoPath::Gram ||
                        (options.path == LassoPath::Auto && X.cols() <= 200);
  if (use_gram) return lasso_fit(GramProblem::from_data(X, y), lambda, options, warm_start);
  return fit_residual_path(X, y, lambda, options, warm_start);
}

LambdaGrid make_lambda_grid(const Matrix& X, const Vector& y, int n_values, double ratio) {
  if (n_values < 2) throw Error(ErrorCode::InvalidArgument, "lambda grid needs >= 2 values");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda grid ratio must lie in (0, 1)");
  }
  if (X.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "make_lambda_grid: X/y rows");
  const double lambda_max = 2.0 * (X.transpose() * y).cwiseAbs().maxCoeff();
  const double scale = X.cwiseAbs().maxCoeff() * y.cwiseAbs().maxCoeff();
  if (!(lambda_max > 1e-12 * scale) || !std::isfinite(lambda_max)) {
    throw Error(ErrorCode::DegenerateResponse, "response has no correlation with any predictor");
  }
  LambdaGrid grid;
  grid.values.resize(n_values);
  const double log_step = std::log(ratio) / (n_values - 1);
  for (int i = 0; i < n_values; ++i) grid.values[i] = lambda_max * std::exp(log_step * i);
  grid.values.front() = lambda_max;
  grid.values.back() = ratio * lambda_max;
  return grid;
}

CvSelection lasso_cv_select(const Matrix& X, const Vector& y, std::size_t K, const LambdaGrid& grid,
                            std::uint64_t seed, const LassoOptions& options) {
  if (X.rows() != y.size()) throw Error(ErrorCode::DimensionMismatch, "lasso_cv_select: X/y rows");
  if (grid.values.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda grid");
  const auto n = static_cast<std::size_t>(X.rows());
  Rng rng(seed);
  const auto folds = kfold_split(n, K, rng);
  const std::size_t n_grid = grid.values.size();

  std::vector<double> sse(n_grid, 0.0);
  for (const auto& test : folds) {
    const Fold train = complement(test, n);
    auto [x_train, x_means] = center_columns(X(train, Eigen::all));
    const Vector y_raw = y(train);
    const double y_mean = y_raw.mean();
    const Vector y_train = y_raw.array() - y_mean;
    const GramProblem problem = GramProblem::from_data(x_train, y_train);
    const double scale = static_cast<double>(train.size()) / static_cast<double>(n);

    const Matrix x_test = X(test, Eigen::all).rowwise() - x_means.transpose();
    const Vector y_test = y(test).array() - y_mean;

    Vector warm = Vector::Zero(X.cols());
    for (std::size_t g = 0; g < n_grid; ++g) {
      const double lambda = grid.values[g] * scale;
      LassoFit fit;
      try {
        fit = lasso_fit(problem, lambda, options, &warm);
      } catch (const DidNotConverge& e) {
        fit = e.best();
      }
      warm = fit.coefficients;
      sse[g] += (y_test - x_test * fit.coefficients).squaredNorm();
    }
  }

  CvSelection selection;
  selection.cv_error.resize(n_grid);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < n_grid; ++g) {
    selection.cv_error[g] = sse[g] / static_cast<double>(n);
    if (selection.cv_error[g] < best) {
      best = selection.cv_error[g];
      selection.index = g;
    }
  }
  selection.lambda = grid.values[selection.index];

  auto [x_full, x_means] = center_columns(X);
  const Vector y_full = y.array() - y.mean();
  selection.fit = lasso_fit(x_full, y_full, selection.lambda, options);
  return selection;
}

}  // namespace stein
