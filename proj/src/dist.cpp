#include "stein_lasso/dist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "stein_lasso/error.hpp"

namespace stein {

namespace {

constexpr double kWeightCoverage = 1.0 - 1e-14;

// Calls term(j, weight_j) for Poisson(lambda) weights until the accumulated
// weight reaches kWeightCoverage. Weights are formed in log space so large
// noncentralities do not underflow the first terms into oblivion.
template <typename Term>
void for_each_poisson_weight(double lambda, Term&& term) {
  if (lambda == 0.0) {
    term(0, 1.0);
    return;
  }
  const double log_lambda = std::log(lambda);
  const double j_cap = lambda + 40.0 * std::sqrt(lambda) + 200.0;
  double cumulative = 0.0;
  for (int j = 0;; ++j) {
    const double w = std::exp(-lambda + j * log_lambda - std::lgamma(j + 1.0));
    term(j, w);
    cumulative += w;
    if (cumulative >= kWeightCoverage) break;
    if (j > lambda && (w < 1e-18 * cumulative || j > j_cap)) break;
  }
}

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a)) * sum;
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
}

struct GaussLegendre {
  static constexpr int kOrder = 15;
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};

  GaussLegendre() {
    for (int i = 0; i < kOrder; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= kOrder; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  template <typename F>
  double apply(const F& f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (int i = 0; i < kOrder; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return sum * half;
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Globally adaptive Gauss-Legendre: the panel whose two-half estimate differs
// most from its whole-panel estimate is bisected until the summed
// differences fall below rel_tol of the total, or the panel budget runs out.
template <typename F>
double integrate_adaptive(const F& f, double lo, double hi, double rel_tol) {
  constexpr int kInitialPanels = 16;
  constexpr int kMaxPanels = 4000;
  const auto& rule = gauss_legendre();
  const auto make_panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const double whole = rule.apply(f, a, b);
    const double halves = rule.apply(f, a, mid) + rule.apply(f, mid, b);
    return Panel{a, b, halves, std::abs(halves - whole)};
  };

  std::priority_queue<Panel> panels;
  double total = 0.0;
  double error = 0.0;
  const double width = (hi - lo) / kInitialPanels;
  for (int i = 0; i < kInitialPanels; ++i) {
    const Panel panel = make_panel(lo + i * width, i + 1 == kInitialPanels ? hi : lo + (i + 1) * width);
    total += panel.value;
    error += panel.error;
    panels.push(panel);
  }
  while (error > rel_tol * std::abs(total) && static_cast<int>(panels.size()) < kMaxPanels) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      panels.push(Panel{worst.lo, worst.hi, worst.value, 0.0});
      error -= worst.error;
      continue;
    }
    const Panel left = make_panel(worst.lo, mid);
    const Panel right = make_panel(mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // Re-sum from the leaves to shed the drift of the running updates.
  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

// Noncentral density with the per-component constants hoisted out of the
// integrand.
class MixtureDensity {
 public:
  explicit MixtureDensity(const NoncentralChiSq& d) {
    for_each_poisson_weight(0.5 * d.noncentrality(), [&](int j, double w) {
      if (w <= 0.0) return;
      const double half_df = 0.5 * d.df() + j;
      log_consts_.push_back(std::log(w) - half_df * std::numbers::ln2 - std::lgamma(half_df));
      exponents_.push_back(half_df - 1.0);
    });
  }

  double operator()(double x) const {
    if (x <= 0.0) return 0.0;
    const double log_x = std::log(x);
    double sum = 0.0;
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      sum += std::exp(log_consts_[j] + exponents_[j] * log_x - 0.5 * x);
    }
    return sum;
  }

  // Integral of (1 - a/x)^2 density(x) over (0, eps), with exp(-x/2) taken
  // as 1. Finite only when every component has df > 4 (or a = 0).
  double near_zero(double a, double eps) const {
    const double log_eps = std::log(eps);
    double sum = 0.0;
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      const double h = exponents_[j] + 1.0;
      double part = std::exp(h * log_eps) / h;
      if (a != 0.0) {
        part += -2.0 * a * std::exp((h - 1.0) * log_eps) / (h - 1.0) +
                a * a * std::exp((h - 2.0) * log_eps) / (h - 2.0);
      }
      sum += std::exp(log_consts_[j]) * part;
    }
    return sum;
  }

 private:
  std::vector<double> log_consts_;
  std::vector<double> exponents_;
};

}  // namespace

NoncentralChiSq::NoncentralChiSq(double df, double noncentrality)
    : df_(df), noncentrality_(noncentrality) {
  if (!(df >= 1.0) || !std::isfinite(df)) {
    throw Error(ErrorCode::InvalidArgument, "chi-square df must be >= 1, got " + std::to_string(df));
  }
  if (!(noncentrality >= 0.0) || !std::isfinite(noncentrality)) {
    throw Error(ErrorCode::InvalidArgument,
                "noncentrality must be finite and >= 0, got " + std::to_string(noncentrality));
  }
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "regularized_gamma_p: a must be > 0");
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double p = x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_continued_fraction(a, x);
  return std::clamp(p, 0.0, 1.0);
}

double central_chisq_cdf(double x, double df) {
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double noncentral_chisq_cdf(double x, const NoncentralChiSq& d) {
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  double sum = 0.0;
  for_each_poisson_weight(0.5 * d.noncentrality(), [&](int j, double w) {
    sum += w * central_chisq_cdf(x, d.df() + 2.0 * j);
  });
  return std::clamp(sum, 0.0, 1.0);
}

double central_chisq_quantile(double alpha, double df) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  const double target = 1.0 - alpha;
  double lo = 0.0;
  double hi = df + 20.0 * std::sqrt(df) + 50.0;
  for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (central_chisq_cdf(mid, df) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double inv_moment(int r, const NoncentralChiSq& d) {
  if (r < 1) throw Error(ErrorCode::InvalidArgument, "inv_moment: order must be >= 1");
  if (!(d.df() > 2.0 * r)) {
    throw Error(ErrorCode::MomentDiverges, "E[chi^-" + std::to_string(2 * r) + "] with df " +
                                               std::to_string(d.df()) + " is infinite");
  }
  double sum = 0.0;
  for_each_poisson_weight(0.5 * d.noncentrality(), [&](int j, double w) {
    double term = w;
    for (int s = 1; s <= r; ++s) term /= d.df() + 2.0 * j - 2.0 * s;
    sum += term;
  });
  return sum;
}

double truncated_shrink_moment(const NoncentralChiSq& d, double a, double cutoff) {
  if (!(cutoff > 0.0)) return 0.0;
  constexpr double kLower = 1e-12;
  if (cutoff <= kLower) return 0.0;
  const MixtureDensity density(d);
  // Beyond this point the remaining mass is far below the tolerance.
  const double far_tail =
      d.df() + d.noncentrality() + 40.0 * std::sqrt(2.0 * (d.df() + 2.0 * d.noncentrality())) + 100.0;
  const double upper = std::min(cutoff, far_tail);
  const double head = (d.df() > 4.0 || a == 0.0) ? density.near_zero(a, kLower) : 0.0;
  // Substituting x = t^2 removes the x^(df/2 - 1) endpoint behavior that
  // would otherwise stall refinement near zero.
  const auto integrand = [&](double t) {
    const double x = t * t;
    const double shrink = 1.0 - a / x;
    return shrink * shrink * density(x) * 2.0 * t;
  };
  return head + integrate_adaptive(integrand, std::sqrt(kLower), std::sqrt(upper), 1e-10);
}

namespace detail {

double noncentral_chisq_pdf(double x, const NoncentralChiSq& d) { return MixtureDensity(d)(x); }

}  // namespace detail

}  // namespace stein
