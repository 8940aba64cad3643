#pragma once

// Noncentral chi-square machinery used by the risk formulas.
//
// All series below are Poisson mixtures over central chi-square terms with
// weights Pois(j; noncentrality / 2), truncated once the accumulated weight
// reaches 1 - 1e-14.

namespace stein {

/// Degrees of freedom and noncentrality of a chi-square law.
class NoncentralChiSq {
 public:
  NoncentralChiSq(double df, double noncentrality);

  double df() const noexcept { return df_; }
  double noncentrality() const noexcept { return noncentrality_; }

 private:
  double df_;
  double noncentrality_;
};

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

double central_chisq_cdf(double x, double df);

double noncentral_chisq_cdf(double x, const NoncentralChiSq& d);

/// Same law as noncentral_chisq_cdf; named for its role in the PTLE risk.
inline double truncated_indicator_cdf(double x, const NoncentralChiSq& d) {
  return noncentral_chisq_cdf(x, d);
}

/// Upper-alpha critical value: the c with central CDF(c; df) = 1 - alpha.
double central_chisq_quantile(double alpha, double df);

/// E[W^-r] for W ~ chi-square(df, noncentrality). Requires df > 2r.
double inv_moment(int r, const NoncentralChiSq& d);

/// E[(1 - a / W)^2 1{W < cutoff}] by adaptive Gauss-Legendre quadrature.
double truncated_shrink_moment(const NoncentralChiSq& d, double a, double cutoff);

namespace detail {

double noncentral_chisq_pdf(double x, const NoncentralChiSq& d);

}  // namespace detail

}  // namespace stein
