#include "stein_lasso/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "stein_lasso/dist.hpp"

namespace stein {

namespace {

void require_stein(const FitContext& ctx) {
  if (ctx.p < 3) {
    throw Error(ErrorCode::InvalidDimension,
                "Stein-type shrinkage needs p >= 3, got p=" + std::to_string(ctx.p));
  }
  if (!(ctx.L_n > 0.0)) {
    throw Error(ErrorCode::DivergentShrinkage, "test statistic is zero; Stein factor undefined");
  }
}

double stein_factor(const FitContext& ctx) {
  return 1.0 - (static_cast<double>(ctx.p) - 2.0) / ctx.L_n;
}

bool test_rejects(const FitContext& ctx) { return ctx.L_n >= ctx.c_alpha; }
bool positive_part(const FitContext& ctx) { return ctx.L_n > static_cast<double>(ctx.p) - 2.0; }

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::LSE: return "LSE";
    case EstimatorKind::RE: return "RE";
    case EstimatorKind::PTE: return "PTE";
    case EstimatorKind::JSE: return "JSE";
    case EstimatorKind::PRSE: return "PRSE";
    case EstimatorKind::IPT: return "IPT";
    case EstimatorKind::LE: return "LE";
    case EstimatorKind::PTLE: return "PTLE";
    case EstimatorKind::SLE: return "SLE";
    case EstimatorKind::PSLE: return "PSLE";
  }
  return "?";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (const auto kind : kAllEstimators) {
    if (to_string(kind) == upper) return kind;
  }
  return std::nullopt;
}

bool is_lasso_based(EstimatorKind kind) noexcept {
  return kind == EstimatorKind::LE || kind == EstimatorKind::PTLE || kind == EstimatorKind::SLE ||
         kind == EstimatorKind::PSLE;
}

Vector FitContext::predict(const Matrix& X, const Vector& beta) const {
  return ((X.rowwise() - x_means.transpose()) * beta).array() + y_mean;
}

Vector ols_fit(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "ols_fit: X has " + std::to_string(X.rows()) +
                                                  " rows, y has " + std::to_string(y.size()));
  }
  if (X.rows() <= X.cols()) {
    throw Error(ErrorCode::InvalidDimension, "ols_fit: need n > p, got n=" +
                                                 std::to_string(X.rows()) +
                                                 ", p=" + std::to_string(X.cols()));
  }
  return cholesky_solve(gram(X), X.transpose() * y);
}

double residual_variance(const Matrix& X, const Vector& y, const Vector& beta_ols) {
  const auto n = X.rows();
  const auto p = X.cols();
  if (n <= p) throw Error(ErrorCode::InvalidDimension, "residual_variance: need n > p");
  const double rss = (y - X * beta_ols).squaredNorm();
  if (rss < 1e-12 * y.squaredNorm()) {
    throw Error(ErrorCode::ZeroResidual, "least-squares fit is exact; s^2 is zero");
  }
  return rss / static_cast<double>(n - p);
}

double test_statistic(const Vector& beta_ols, const Matrix& gram, double s2) {
  if (!(s2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "test_statistic: s2 must be > 0");
  return std::max(0.0, beta_ols.dot(gram * beta_ols)) / s2;
}

Vector classic_shrink(EstimatorKind kind, const FitContext& ctx) {
  const Vector& b = ctx.beta_ols;
  switch (kind) {
    case EstimatorKind::LSE:
      return b;
    case EstimatorKind::RE:
      return Vector::Zero(b.size());
    case EstimatorKind::PTE:
      return test_rejects(ctx) ? b : Vector::Zero(b.size());
    case EstimatorKind::JSE:
      require_stein(ctx);
      return stein_factor(ctx) * b;
    case EstimatorKind::PRSE:
      require_stein(ctx);
      return positive_part(ctx) ? Vector(stein_factor(ctx) * b) : Vector::Zero(b.size());
    case EstimatorKind::IPT:
      require_stein(ctx);
      return test_rejects(ctx) ? Vector(stein_factor(ctx) * b) : Vector::Zero(b.size());
    default:
      throw Error(ErrorCode::InvalidArgument,
                  std::string(to_string(kind)) + " is not a least-squares based estimator");
  }
}

Vector lasso_shrink(EstimatorKind kind, const FitContext& ctx) {
  const Vector& b = ctx.beta_lasso;
  switch (kind) {
    case EstimatorKind::LE:
      return b;
    case EstimatorKind::PTLE:
      return test_rejects(ctx) ? b : Vector::Zero(b.size());
    case EstimatorKind::SLE:
      require_stein(ctx);
      return stein_factor(ctx) * b;
    case EstimatorKind::PSLE:
      require_stein(ctx);
      return positive_part(ctx) ? Vector(stein_factor(ctx) * b) : Vector::Zero(b.size());
    default:
      throw Error(ErrorCode::InvalidArgument,
                  std::string(to_string(kind)) + " is not a LASSO based estimator");
  }
}

Vector estimate(EstimatorKind kind, const FitContext& ctx) {
  return is_lasso_based(kind) ? lasso_shrink(kind, ctx) : classic_shrink(kind, ctx);
}

FitContext build_context(const Matrix& X, const Vector& y, double alpha, const LassoConfig& lasso) {
  if (X.rows() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "build_context: X has " + std::to_string(X.rows()) +
                                                  " rows, y has " + std::to_string(y.size()));
  }
  if (X.cols() < 1 || X.rows() <= X.cols()) {
    throw Error(ErrorCode::InvalidDimension, "build_context: need n > p >= 1");
  }
  FitContext ctx;
  ctx.n = static_cast<std::size_t>(X.rows());
  ctx.p = static_cast<std::size_t>(X.cols());
  ctx.alpha = alpha;
  ctx.c_alpha = central_chisq_quantile(alpha, static_cast<double>(ctx.p));

  auto [xc, means] = center_columns(X);
  ctx.x_means = std::move(means);
  ctx.y_mean = y.mean();
  const Vector yc = y.array() - ctx.y_mean;

  ctx.gram = gram(xc);
  ctx.beta_ols = cholesky_solve(ctx.gram, xc.transpose() * yc);
  ctx.s2 = residual_variance(xc, yc, ctx.beta_ols);
  ctx.L_n = test_statistic(ctx.beta_ols, ctx.gram, ctx.s2);

  if (lasso.fixed_lambda) {
    ctx.lambda = *lasso.fixed_lambda;
    ctx.beta_lasso = lasso_fit(xc, yc, ctx.lambda, lasso.solver).coefficients;
  } else {
    const LambdaGrid grid = make_lambda_grid(xc, yc, lasso.grid_size, lasso.grid_ratio);
    CvSelection sel = lasso_cv_select(xc, yc, lasso.cv_folds, grid, lasso.seed, lasso.solver);
    ctx.lambda = sel.lambda;
    ctx.beta_lasso = std::move(sel.fit.coefficients);
  }
  return ctx;
}

}  // namespace stein
