#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stein_lasso/lasso.hpp"
#include "stein_lasso/linalg.hpp"
#include "stein_lasso/random.hpp"

namespace stein {

enum class EstimatorKind { LSE, RE, PTE, JSE, PRSE, IPT, LE, PTLE, SLE, PSLE };

inline constexpr std::array<EstimatorKind, 10> kAllEstimators = {
    EstimatorKind::LSE, EstimatorKind::RE,  EstimatorKind::PTE,  EstimatorKind::JSE,
    EstimatorKind::PRSE, EstimatorKind::IPT, EstimatorKind::LE,  EstimatorKind::PTLE,
    EstimatorKind::SLE, EstimatorKind::PSLE};

std::string_view to_string(EstimatorKind kind) noexcept;
/// Case-insensitive; nullopt for unknown names.
std::optional<EstimatorKind> parse_estimator(std::string_view name);

bool is_lasso_based(EstimatorKind kind) noexcept;

/// How the LASSO penalty is chosen when building a context.
struct LassoConfig {
  std::optional<double> fixed_lambda;  // bypasses cross-validation
  std::size_t cv_folds = 5;
  int grid_size = 100;
  double grid_ratio = 1e-4;
  std::uint64_t seed = kDefaultSeed;
  LassoOptions solver;
};

/// Everything the shrinkage transforms consume. Immutable once built.
struct FitContext {
  Vector beta_ols;
  Vector beta_lasso;
  Matrix gram;  // C = X'X of the centered design
  double s2 = 0.0;
  double L_n = 0.0;
  std::size_t p = 0;
  std::size_t n = 0;
  double c_alpha = 0.0;
  double alpha = 0.05;
  double lambda = 0.0;
  Vector x_means;
  double y_mean = 0.0;

  /// Fitted response for raw predictor rows.
  Vector predict(const Matrix& X, const Vector& beta) const;
};

Vector ols_fit(const Matrix& X, const Vector& y);

/// RSS / (n - p). Throws ZeroResidual for an (almost) exact fit.
double residual_variance(const Matrix& X, const Vector& y, const Vector& beta_ols);

/// beta' C beta / s2.
double test_statistic(const Vector& beta_ols, const Matrix& gram, double s2);

/// LSE, RE, PTE, JSE, PRSE and IPT built on the least-squares fit.
Vector classic_shrink(EstimatorKind kind, const FitContext& ctx);

/// LE, PTLE, SLE and PSLE built on the LASSO fit.
Vector lasso_shrink(EstimatorKind kind, const FitContext& ctx);

/// Dispatches to classic_shrink or lasso_shrink.
Vector estimate(EstimatorKind kind, const FitContext& ctx);

/// Centers X and y, fits least squares and LASSO, and computes s2, L_n and
/// the central chi-square critical value c_alpha on p degrees of freedom.
FitContext build_context(const Matrix& X, const Vector& y, double alpha,
                         const LassoConfig& lasso = {});

}  // namespace stein
