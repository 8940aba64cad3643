#include <doctest.h>

#include <cmath>

#include "stein_lasso/csv.hpp"
#include "stein_lasso/error.hpp"
#include "stein_lasso/sim.hpp"

using namespace stein;

namespace {

SimCellConfig small_cell() {
  SimCellConfig cfg;
  cfg.n = 60;
  cfg.p = 5;
  cfg.sigma = 2.0;
  cfg.k = 2;
  cfg.delta2 = 1.0;
  cfg.replications = 40;
  cfg.fixed_lambda = 5.0;
  return cfg;
}

}  // namespace

TEST_CASE("build_beta") {
  Vector expected = Vector::Zero(10);
  expected.head(3).setOnes();
  CHECK(build_beta(10, 3, 0.0) == expected);
  expected(9) = 5.0;
  CHECK(build_beta(10, 3, 5.0) == expected);
  CHECK(build_beta(10, 0, 0.0).isZero(0.0));
  CHECK(build_beta(10, 3, 4.0, true)(9) == 2.0);
  CHECK(build_beta(4, 4, 0.0) == Vector::Ones(4));
  try {
    build_beta(4, 4, 1.0);
    FAIL("expected NoFreeSlot");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoFreeSlot);
  }
}

TEST_CASE("gen_design") {
  Rng a(5);
  Rng b(5);
  const Matrix X = gen_design(30, 7, 0.4, a);
  CHECK(X.rows() == 30);
  CHECK(X.cols() == 7);
  CHECK(X == gen_design(30, 7, 0.4, b));
  Rng c(5);
  CHECK_THROWS_AS(gen_design(30, 7, 1.0, c), Error);
}

TEST_CASE("gen_design reaches the requested correlation") {
  Rng rng(9);
  const Matrix X = gen_design(100000, 4, 0.5, rng);
  const Matrix centered = X.rowwise() - X.colwise().mean();
  const Matrix cov = centered.transpose() * centered / (X.rows() - 1.0);
  double total = 0.0;
  int count = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      total += cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
      ++count;
    }
  }
  CHECK(std::abs(total / count - 0.5) < 0.01);
}

TEST_CASE("run_cell with LE only has unit efficiency") {
  SimCellConfig cfg = small_cell();
  cfg.estimators = {EstimatorKind::LE};
  const SimCellResult res = run_cell(cfg);
  REQUIRE(res.stats.size() == 1);
  CHECK(res.stats.at(EstimatorKind::LE).releff == 1.0);
}

TEST_CASE("run_cell statistics are consistent") {
  SimCellConfig cfg = small_cell();
  cfg.estimators = {kAllEstimators.begin(), kAllEstimators.end()};
  const SimCellResult res = run_cell(cfg);
  CHECK(res.reps_used == 40);
  CHECK(res.reps_dropped == 0);
  CHECK(res.stats.size() == kAllEstimators.size());
  const double le = res.stats.at(EstimatorKind::LE).mse;
  for (const auto& [kind, s] : res.stats) {
    CHECK(s.mse >= 0.0);
    CHECK(std::abs(s.mse - (s.bias2 + s.variance)) <= 1e-8 * s.mse);
    CHECK(s.releff == doctest::Approx(le / s.mse).epsilon(1e-14));
  }
  CHECK(res.stats.at(EstimatorKind::LE).releff == 1.0);
  // RE is identically zero: its MSE is |beta|^2
  CHECK(res.stats.at(EstimatorKind::RE).mse == doctest::Approx(build_beta(5, 2, 1.0).squaredNorm()));
}

TEST_CASE("run_cell is deterministic and thread-count independent") {
  SimCellConfig cfg = small_cell();
  cfg.fixed_lambda.reset();
  cfg.replications = 30;
  const SimCellResult one = run_cell(cfg, 1);
  const SimCellResult again = run_cell(cfg, 1);
  const SimCellResult four = run_cell(cfg, 4);
  for (const auto& [kind, s] : one.stats) {
    CHECK(s.mse == again.stats.at(kind).mse);
    CHECK(s.mse == four.stats.at(kind).mse);
    CHECK(s.variance == four.stats.at(kind).variance);
  }
  SimCellConfig other = cfg;
  other.seed += 1;
  CHECK(run_cell(other).stats.at(EstimatorKind::LE).mse != one.stats.at(EstimatorKind::LE).mse);
}

TEST_CASE("fixed design and sqrt injection change the experiment") {
  SimCellConfig base = small_cell();
  SimCellConfig fixed = base;
  fixed.fixed_design = true;
  SimCellConfig sq = base;
  sq.sqrt_injection = true;
  sq.delta2 = 4.0;
  base.delta2 = 4.0;
  const double a = run_cell(base).stats.at(EstimatorKind::LE).mse;
  CHECK(run_cell(fixed).stats.at(EstimatorKind::LE).mse != a);
  CHECK(run_cell(sq).stats.at(EstimatorKind::LE).mse != a);
}

TEST_CASE("degenerate replications beyond 1% are fatal") {
  SimCellConfig cfg = small_cell();
  cfg.sigma = 1e-300;
  try {
    run_cell(cfg);
    FAIL("expected TooManyDegenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyDegenerate);
  }
}

TEST_CASE("grid construction") {
  SimCellConfig base;
  CHECK(default_grid(base).size() == 1656);
  const auto grid = make_grid(base, {0.0, 0.9}, {10, 20}, {20.0}, {0, 3}, {0.0, 0.5, 1.0});
  CHECK(grid.size() == 24);
}

TEST_CASE("run_grid matches run_cell and survives failing cells") {
  SimCellConfig base = small_cell();
  auto grid = make_grid(base, {0.0}, {5}, {2.0}, {2, 5}, {0.0, 1.0});
  REQUIRE(grid.size() == 4);
  const auto rows = run_grid(grid, 2);
  REQUIRE(rows.size() == 4);
  int failed = 0;
  for (const auto& row : rows) {
    if (!row.result) {
      ++failed;
      CHECK(row.config.k == 5);
      CHECK(row.config.delta2 == 1.0);
      CHECK_FALSE(row.error.empty());
    }
  }
  CHECK(failed == 1);
  const SimCellResult direct = run_cell(rows[0].config);
  CHECK(rows[0].result->stats.at(EstimatorKind::SLE).mse == direct.stats.at(EstimatorKind::SLE).mse);

  const CsvTable longform = parse_csv(sim_long_csv(rows));
  CHECK(longform.header.size() == 12);
  // three good cells times six estimators plus one marker row
  CHECK(longform.rows.size() == 3 * 6 + 1);
  int markers = 0;
  for (const auto& rec : longform.rows) markers += rec[6] == "ERROR";
  CHECK(markers == 1);
  const CsvTable wide = parse_csv(sim_wide_csv(rows));
  CHECK(wide.header.front() == "n");
  CHECK(wide.rows.size() == 2);
}

TEST_CASE("one replication emits one row per estimator") {
  SimCellConfig cfg = small_cell();
  cfg.replications = 1;
  const auto rows = run_grid({cfg});
  const CsvTable t = parse_csv(sim_long_csv(rows));
  CHECK(t.rows.size() == 6);
}
