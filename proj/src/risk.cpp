#include "stein_lasso/risk.hpp"

#include <cmath>
#include <string>

#include "stein_lasso/dist.hpp"
#include "stein_lasso/error.hpp"

namespace stein {

namespace {

void check_config(const RiskConfig& cfg) {
  if (cfg.p < 1 || cfg.k < 0 || cfg.k > cfg.p) {
    throw Error(ErrorCode::InvalidArgument, "risk config needs p >= 1 and 0 <= k <= p");
  }
  if (!(cfg.sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma2 must be > 0");
  if (!(cfg.c_alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "c_alpha must be >= 0");
}

void check_delta2(double delta2) {
  if (!(delta2 >= 0.0) || !std::isfinite(delta2)) {
    throw Error(ErrorCode::InvalidArgument, "delta2 must be finite and >= 0");
  }
}

double moment(int r, int k, int df_offset, double delta2) {
  try {
    return inv_moment(r, NoncentralChiSq(k + df_offset, delta2));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MomentDiverges) throw;
    throw Error(ErrorCode::MomentDiverges,
                "k=" + std::to_string(k) + ": E[chi^-" + std::to_string(2 * r) + "_{k+" +
                    std::to_string(df_offset) + "}] needs k+" + std::to_string(df_offset) + " > " +
                    std::to_string(2 * r));
  }
}

struct PtleCdfs {
  double h2;
  double h4;
};

PtleCdfs ptle_cdfs(const RiskConfig& cfg, double delta2) {
  return {noncentral_chisq_cdf(cfg.c_alpha, NoncentralChiSq(cfg.k + 2, delta2)),
          noncentral_chisq_cdf(cfg.c_alpha, NoncentralChiSq(cfg.k + 4, delta2))};
}

// (R3 - R1) / sigma^2; its zeros are the break-even divergences.
double ptle_gap(const RiskConfig& cfg, double ms, double delta2) {
  const auto [h2, h4] = ptle_cdfs(cfg, delta2);
  return delta2 * (2.0 * h2 - h4) - ms * h2;
}

}  // namespace

std::vector<double> default_delta2_grid() {
  return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.5,
          2.0, 3.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 50.0};
}

double m_star(int p, int k) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "m_star: p must be >= 1");
  return (1.0 + 2.0 * std::log(static_cast<double>(p))) * (1.0 + k) / p;
}

double risk_le(const RiskConfig& cfg) {
  check_config(cfg);
  return cfg.sigma2 * m_star(cfg.p, cfg.k);
}

double risk_restricted(double delta2) {
  check_delta2(delta2);
  return delta2;
}

double risk_ptle(const RiskConfig& cfg, double delta2) {
  check_config(cfg);
  check_delta2(delta2);
  const double ms = m_star(cfg.p, cfg.k);
  const auto [h2, h4] = ptle_cdfs(cfg, delta2);
  return cfg.sigma2 * (ms * (1.0 - h2) + delta2 * (2.0 * h2 - h4));
}

double risk_sle(const RiskConfig& cfg, double delta2) {
  check_config(cfg);
  check_delta2(delta2);
  const double ms = m_star(cfg.p, cfg.k);
  const double p = cfg.p;
  const int k = cfg.k;

  double value = ms;
  const double shrink_coef = (p - 2.0) * ms;
  if (shrink_coef != 0.0) {
    double bracket = 2.0 * moment(1, k, 2, delta2);
    if (k != 2) bracket -= (k - 2.0) * moment(2, k, 2, delta2);
    value -= shrink_coef * bracket;
  }
  const double drift_coef = (p * p - 4.0) * delta2;
  if (drift_coef != 0.0) value += drift_coef * moment(2, k, 4, delta2);
  return cfg.sigma2 * value;
}

double risk_psle(const RiskConfig& cfg, double delta2) {
  const double r4 = risk_sle(cfg, delta2);
  const int k = cfg.k;
  if (k <= 2) return r4;
  const double a = k - 2.0;
  const double cutoff = k - 2.0;
  const double ms = m_star(cfg.p, k);
  const double null_term = truncated_shrink_moment(NoncentralChiSq(k + 2, delta2), a, cutoff);
  // The published correction lists this expectation twice, as 2E[.] - E[.].
  const double drift_term = truncated_shrink_moment(NoncentralChiSq(k + 4, delta2), a, cutoff);
  return r4 - cfg.sigma2 * ms * null_term +
         cfg.sigma2 * delta2 * (2.0 * drift_term - drift_term);
}

double ptle_breakeven(const RiskConfig& cfg) {
  check_config(cfg);
  constexpr double kUpper = 1000.0;
  constexpr int kScan = 600;
  const double ms = m_star(cfg.p, cfg.k);

  // Geometric scan for the first sign change from <= 0 to > 0.
  double lo = 0.0;
  if (ptle_gap(cfg, ms, lo) > 0.0) {
    throw Error(ErrorCode::NoRootInBracket, "PTLE risk already exceeds LE risk at zero divergence");
  }
  double hi = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double x = 1e-6 * std::pow(kUpper / 1e-6, static_cast<double>(i) / kScan);
    if (ptle_gap(cfg, ms, x) > 0.0) {
      hi = x;
      break;
    }
    lo = x;
  }
  if (hi < 0.0) {
    throw Error(ErrorCode::NoRootInBracket, "PTLE and LE risks do not cross on [0, 1000]");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ptle_gap(cfg, ms, mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<RiskPoint> risk_curve(const RiskConfig& cfg, const std::vector<double>& delta2_grid) {
  std::vector<RiskPoint> curve;
  curve.reserve(delta2_grid.size());
  for (const double d2 : delta2_grid) {
    RiskPoint pt;
    pt.delta2 = d2;
    pt.r1 = risk_le(cfg);
    pt.r2 = risk_restricted(d2);
    pt.r3 = risk_ptle(cfg, d2);
    pt.r4 = risk_sle(cfg, d2);
    pt.r5 = risk_psle(cfg, d2);
    pt.ordered = pt.r5 <= pt.r4 + 1e-9 && pt.r4 <= pt.r1 + 1e-9;
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace stein
