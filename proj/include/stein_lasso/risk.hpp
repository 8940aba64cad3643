#pragma once

#include <vector>

namespace stein {

/// Orthogonal-design setting: p coefficients of which k are non-null.
struct RiskConfig {
  int p = 10;
  int k = 0;
  double sigma2 = 1.0;
  double c_alpha = 0.0;
};

struct RiskPoint {
  double delta2 = 0.0;
  double r1 = 0.0;  // LE
  double r2 = 0.0;  // restricted estimator
  double r3 = 0.0;  // PTLE
  double r4 = 0.0;  // SLE
  double r5 = 0.0;  // PSLE
  bool ordered = false;  // r5 <= r4 <= r1 + 1e-9
};

/// The 23 divergence values 0, 0.1, ..., 1, 1.5, 2, 3, 5, 10, ..., 40, 50.
std::vector<double> default_delta2_grid();

/// (1 + 2 ln p)(1 + k) / p.
double m_star(int p, int k);

double risk_le(const RiskConfig& cfg);
double risk_restricted(double delta2);
double risk_ptle(const RiskConfig& cfg, double delta2);

// The SLE and PSLE risks are assembled term by term in the published form,
// which mixes the (p - 2) multiplier with k-indexed moments. Moments are
// evaluated only when their coefficient is nonzero; a divergent one throws
// MomentDiverges naming k and the offending moment.
double risk_sle(const RiskConfig& cfg, double delta2);
double risk_psle(const RiskConfig& cfg, double delta2);

/// Smallest positive divergence at which the PTLE and LE risks cross, by
/// bisection on [0, 1000]. Throws NoRootInBracket if they never cross.
double ptle_breakeven(const RiskConfig& cfg);

std::vector<RiskPoint> risk_curve(const RiskConfig& cfg, const std::vector<double>& delta2_grid);

}  // namespace stein
