#include "stein_lasso/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <set>
#include <tuple>

#include "stein_lasso/csv.hpp"
#include "stein_lasso/error.hpp"
#include "stein_lasso/parallel.hpp"

namespace stein {

namespace {

void validate(const SimCellConfig& cfg) {
  if (cfg.p < 1 || cfg.n <= cfg.p) {
    throw Error(ErrorCode::InvalidDimension, "simulation cell needs n > p >= 1");
  }
  if (cfg.replications < 1) throw Error(ErrorCode::InvalidArgument, "replications must be >= 1");
  if (!(cfg.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  if (cfg.k < 0 || cfg.k > cfg.p) throw Error(ErrorCode::InvalidArgument, "k must lie in [0, p]");
  if (!(cfg.delta2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delta2 must be >= 0");
}

std::vector<EstimatorKind> with_le(std::vector<EstimatorKind> kinds) {
  if (std::find(kinds.begin(), kinds.end(), EstimatorKind::LE) == kinds.end()) {
    kinds.push_back(EstimatorKind::LE);
  }
  return kinds;
}

bool is_degenerate(const Error& e) {
  return e.code() == ErrorCode::ZeroResidual || e.code() == ErrorCode::DivergentShrinkage;
}

constexpr std::uint64_t kDesignStream = ~std::uint64_t{0};

}  // namespace

Matrix gen_design(int n, int p, double r, Rng& rng) {
  const Matrix L = equicorr_cholesky(p, r);
  std::normal_distribution<double> normal;
  Matrix Z(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) Z(i, j) = normal(rng);
  }
  return Z * L.transpose();
}

Vector build_beta(int p, int k, double delta2, bool sqrt_injection) {
  if (k < 0 || k > p) throw Error(ErrorCode::InvalidArgument, "build_beta: k must lie in [0, p]");
  if (!(delta2 >= 0.0)) throw Error(ErrorCode::InvalidArgument, "build_beta: delta2 must be >= 0");
  Vector beta = Vector::Zero(p);
  beta.head(k).setOnes();
  if (delta2 > 0.0) {
    if (k == p) throw Error(ErrorCode::NoFreeSlot, "build_beta: k == p leaves no slot for delta2");
    beta(p - 1) = sqrt_injection ? std::sqrt(delta2) : delta2;
  }
  return beta;
}

std::uint64_t cell_id(const SimCellConfig& cfg) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const std::uint64_t part :
       {static_cast<std::uint64_t>(cfg.n), static_cast<std::uint64_t>(cfg.p),
        std::bit_cast<std::uint64_t>(cfg.r), std::bit_cast<std::uint64_t>(cfg.sigma),
        static_cast<std::uint64_t>(cfg.k), std::bit_cast<std::uint64_t>(cfg.delta2)}) {
    h = splitmix64(h ^ part);
  }
  return h;
}

SimCellResult run_cell(const SimCellConfig& cfg, int threads) {
  validate(cfg);
  const std::vector<EstimatorKind> kinds = with_le(cfg.estimators);
  const Vector beta = build_beta(cfg.p, cfg.k, cfg.delta2, cfg.sqrt_injection);
  const std::uint64_t cid = cell_id(cfg);

  std::optional<Matrix> fixed_x;
  if (cfg.fixed_design) {
    Rng design_rng = make_stream(cfg.seed, {cid, kDesignStream});
    fixed_x = gen_design(cfg.n, cfg.p, cfg.r, design_rng);
  }

  // estimates[rep][kind]; empty when the replication was dropped.
  std::vector<std::vector<Vector>> estimates(cfg.replications);
  parallel_for(static_cast<std::size_t>(cfg.replications), threads, [&](std::size_t rep) {
    Rng rng = make_stream(cfg.seed, {cid, rep});
    const Matrix X = fixed_x ? *fixed_x : gen_design(cfg.n, cfg.p, cfg.r, rng);
    std::normal_distribution<double> noise(0.0, cfg.sigma);
    Vector y = X * beta;
    for (int i = 0; i < cfg.n; ++i) y(i) += noise(rng);

    LassoConfig lasso;
    lasso.fixed_lambda = cfg.fixed_lambda;
    lasso.seed = rng();
    try {
      const FitContext ctx = build_context(X, y, cfg.alpha, lasso);
      std::vector<Vector> row;
      row.reserve(kinds.size());
      for (const auto kind : kinds) row.push_back(estimate(kind, ctx));
      estimates[rep] = std::move(row);
    } catch (const Error& e) {
      if (!is_degenerate(e)) throw;
    }
  });

  SimCellResult result;
  result.config = cfg;
  for (const auto& row : estimates) (row.empty() ? result.reps_dropped : result.reps_used)++;
  if (result.reps_dropped * 100 > cfg.replications) {
    throw Error(ErrorCode::TooManyDegenerate,
                std::to_string(result.reps_dropped) + " of " + std::to_string(cfg.replications) +
                    " replications were degenerate");
  }
  if (result.reps_used == 0) throw Error(ErrorCode::TooManyDegenerate, "no usable replications");

  const double used = result.reps_used;
  for (std::size_t idx = 0; idx < kinds.size(); ++idx) {
    Vector mean = Vector::Zero(cfg.p);
    for (const auto& row : estimates) {
      if (!row.empty()) mean += row[idx];
    }
    mean /= used;
    Vector var = Vector::Zero(cfg.p);
    double sq_error = 0.0;
    for (const auto& row : estimates) {
      if (row.empty()) continue;
      var += (row[idx] - mean).cwiseAbs2();
      sq_error += (row[idx] - beta).squaredNorm();
    }
    var /= used;
    EstimatorStats s;
    s.bias2 = (mean - beta).squaredNorm();
    s.variance = var.sum();
    s.mse = sq_error / used;
    result.stats[kinds[idx]] = s;
  }
  const double mse_le = result.stats.at(EstimatorKind::LE).mse;
  for (auto& [kind, s] : result.stats) {
    s.releff = kind == EstimatorKind::LE ? 1.0 : mse_le / s.mse;
  }
  return result;
}

std::vector<SimCellConfig> make_grid(const SimCellConfig& base, const std::vector<double>& rs,
                                     const std::vector<int>& ps, const std::vector<double>& sigmas,
                                     const std::vector<int>& ks,
                                     const std::vector<double>& delta2s) {
  std::vector<SimCellConfig> grid;
  grid.reserve(rs.size() * ps.size() * sigmas.size() * ks.size() * delta2s.size());
  for (const double r : rs) {
    for (const int p : ps) {
      for (const double sigma : sigmas) {
        for (const int k : ks) {
          for (const double d2 : delta2s) {
            SimCellConfig cfg = base;
            cfg.r = r;
            cfg.p = p;
            cfg.sigma = sigma;
            cfg.k = k;
            cfg.delta2 = d2;
            grid.push_back(cfg);
          }
        }
      }
    }
  }
  return grid;
}

std::vector<SimCellConfig> default_grid(const SimCellConfig& base) {
  return make_grid(base, {0.0, 0.5, 0.9}, {10, 20, 50}, {10.0, 20.0}, {0, 1, 3, 5},
                   {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.5, 2.0, 3.0, 5.0,
                    10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 50.0});
}

std::vector<GridRow> run_grid(const std::vector<SimCellConfig>& grid, int threads, bool progress) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "run_grid: empty grid");
  std::vector<GridRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    GridRow row;
    row.config = grid[i];
    try {
      row.result = run_cell(grid[i], threads);
    } catch (const Error& e) {
      row.error = e.what();
    }
    if (progress) {
      std::cerr << "cell " << (i + 1) << "/" << grid.size() << " n=" << grid[i].n
                << " p=" << grid[i].p << " r=" << grid[i].r << " sigma=" << grid[i].sigma
                << " k=" << grid[i].k << " delta2=" << grid[i].delta2
                << (row.error.empty() ? "" : " FAILED: " + row.error) << '\n';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sim_long_csv(const std::vector<GridRow>& rows) {
  CsvTable table;
  table.header = {"n", "p", "r", "sigma", "k", "delta2", "estimator",
                  "mse", "bias2", "var", "releff", "reps_used"};
  for (const auto& row : rows) {
    const auto& c = row.config;
    const std::vector<std::string> prefix = {
        std::to_string(c.n), std::to_string(c.p), format_number(c.r), format_number(c.sigma),
        std::to_string(c.k), format_number(c.delta2)};
    if (!row.result) {
      auto rec = prefix;
      rec.insert(rec.end(), {"ERROR", "", "", "", "", "0"});
      table.rows.push_back(std::move(rec));
      continue;
    }
    for (const auto kind : kAllEstimators) {
      const auto it = row.result->stats.find(kind);
      if (it == row.result->stats.end()) continue;
      auto rec = prefix;
      rec.insert(rec.end(), {std::string(to_string(kind)), format_number(it->second.mse),
                             format_number(it->second.bias2), format_number(it->second.variance),
                             format_number(it->second.releff),
                             std::to_string(row.result->reps_used)});
      table.rows.push_back(std::move(rec));
    }
  }
  return write_csv(table);
}

std::string sim_wide_csv(const std::vector<GridRow>& rows) {
  static constexpr EstimatorKind kColumns[] = {EstimatorKind::LSE, EstimatorKind::IPT,
                                               EstimatorKind::PTLE, EstimatorKind::SLE,
                                               EstimatorKind::PSLE};
  using TableKey = std::tuple<int, double, int, double>;  // n, r, p, sigma
  std::vector<TableKey> tables;
  std::map<TableKey, std::vector<double>> deltas;
  std::set<int> ks;
  std::map<std::tuple<TableKey, double, int>, const GridRow*> index;
  for (const auto& row : rows) {
    const auto& c = row.config;
    const TableKey key{c.n, c.r, c.p, c.sigma};
    if (std::find(tables.begin(), tables.end(), key) == tables.end()) tables.push_back(key);
    auto& ds = deltas[key];
    if (std::find(ds.begin(), ds.end(), c.delta2) == ds.end()) ds.push_back(c.delta2);
    ks.insert(c.k);
    index[{key, c.delta2, c.k}] = &row;
  }

  CsvTable table;
  table.header = {"n", "r", "p", "sigma", "delta2"};
  for (const int k : ks) {
    for (const auto kind : kColumns) {
      table.header.push_back("k" + std::to_string(k) + "_" + std::string(to_string(kind)));
    }
  }
  for (const auto& key : tables) {
    const auto& [n, r, p, sigma] = key;
    for (const double d2 : deltas[key]) {
      std::vector<std::string> rec = {std::to_string(n), format_number(r), std::to_string(p),
                                      format_number(sigma), format_number(d2)};
      for (const int k : ks) {
        const auto it = index.find({key, d2, k});
        const SimCellResult* res =
            it != index.end() && it->second->result ? &*it->second->result : nullptr;
        for (const auto kind : kColumns) {
          std::string cell;
          if (res != nullptr) {
            const auto s = res->stats.find(kind);
            if (s != res->stats.end()) cell = format_number(s->second.releff);
          }
          rec.push_back(std::move(cell));
        }
      }
      table.rows.push_back(std::move(rec));
    }
  }
  return write_csv(table);
}

}  // namespace stein
