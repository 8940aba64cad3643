#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stein_lasso/estimators.hpp"
#include "stein_lasso/linalg.hpp"
#include "stein_lasso/random.hpp"

namespace stein {

/// One configuration of the relative-efficiency experiment.
struct SimCellConfig {
  int n = 100;
  int p = 10;
  double r = 0.0;
  double sigma = 10.0;
  int k = 0;
  double delta2 = 0.0;
  int replications = 1000;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  std::vector<EstimatorKind> estimators = {EstimatorKind::LSE, EstimatorKind::IPT,
                                           EstimatorKind::PTLE, EstimatorKind::SLE,
                                           EstimatorKind::PSLE};
  // Draw one design per cell and reuse it across replications.
  bool fixed_design = false;
  // Place sqrt(delta2) rather than delta2 in the last coefficient.
  bool sqrt_injection = false;
  // Skip the per-replication cross-validation.
  std::optional<double> fixed_lambda;
};

struct EstimatorStats {
  double mse = 0.0;    // sum over coordinates of bias^2 + variance
  double bias2 = 0.0;
  double variance = 0.0;
  double releff = 0.0;  // MSE(LE) / MSE(this)
};

struct SimCellResult {
  SimCellConfig config;
  std::map<EstimatorKind, EstimatorStats> stats;  // always includes LE
  int reps_used = 0;
  int reps_dropped = 0;
};

/// n x p rows drawn from N(0, (1 - r) I + r J).
Matrix gen_design(int n, int p, double r, Rng& rng);

/// First k entries 1, last entry delta2 (when positive), zeros elsewhere.
Vector build_beta(int p, int k, double delta2, bool sqrt_injection = false);

/// Stream identifier of a cell; depends on its parameters only.
std::uint64_t cell_id(const SimCellConfig& cfg);

SimCellResult run_cell(const SimCellConfig& cfg, int threads = 1);

struct GridRow {
  SimCellConfig config;
  std::optional<SimCellResult> result;
  std::string error;  // set when the cell failed
};

/// Full factorial r x p x sigma x k x delta2 with the given shared settings.
std::vector<SimCellConfig> make_grid(const SimCellConfig& base, const std::vector<double>& rs,
                                     const std::vector<int>& ps, const std::vector<double>& sigmas,
                                     const std::vector<int>& ks,
                                     const std::vector<double>& delta2s);

/// The published grid: r in {0, .5, .9}, p in {10, 20, 50}, sigma in {10, 20},
/// k in {0, 1, 3, 5}, 23 divergence values.
std::vector<SimCellConfig> default_grid(const SimCellConfig& base);

/// Runs every cell; a failing cell is recorded and the sweep continues.
std::vector<GridRow> run_grid(const std::vector<SimCellConfig>& grid, int threads = 1,
                              bool progress = false);

/// One row per (cell, estimator).
std::string sim_long_csv(const std::vector<GridRow>& rows);

/// Table layout: one row per (r, p, sigma, delta2), column groups per k,
/// relative efficiencies of LSE, IPT, PTLE, SLE, PSLE.
std::string sim_wide_csv(const std::vector<GridRow>& rows);

}  // namespace stein
