// Command-line front end: fit, risk, simulate, cv, datasets.
//
// Exit codes: 0 success, 2 usage / input errors, 3 numeric errors.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stein_lasso/csv.hpp"
#include "stein_lasso/dist.hpp"
#include "stein_lasso/error.hpp"
#include "stein_lasso/estimators.hpp"
#include "stein_lasso/eval.hpp"
#include "stein_lasso/parallel.hpp"
#include "stein_lasso/risk.hpp"
#include "stein_lasso/sim.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<stein::EstimatorKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<stein::EstimatorKind> kinds;
  for (const auto& name : names) {
    const auto kind = stein::parse_estimator(name);
    if (!kind) {
      throw UsageError("unknown estimator '" + name +
                       "' (expected one of LSE, RE, PTE, JSE, PRSE, IPT, LE, PTLE, SLE, PSLE)");
    }
    kinds.push_back(*kind);
  }
  return kinds;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw stein::Error(stein::ErrorCode::FileNotFound, "cannot write '" + path + "'");
  out << text;
}

struct FitArgs {
  std::string data;
  std::string response;
  std::string estimator;
  double alpha = 0.05;
  std::optional<double> lambda;
  std::size_t inner_k = 5;
  std::uint64_t seed = stein::kDefaultSeed;
  std::string out = "-";
};

int run_fit(const FitArgs& args) {
  const auto kinds = parse_kinds({args.estimator});
  const stein::Dataset ds = stein::load_dataset(
      args.data, args.response.empty() ? std::nullopt : std::optional<std::string>(args.response));
  stein::LassoConfig lasso;
  lasso.fixed_lambda = args.lambda;
  lasso.cv_folds = args.inner_k;
  lasso.seed = args.seed;
  const stein::FitContext ctx = stein::build_context(ds.X, ds.y, args.alpha, lasso);
  const stein::Vector beta = stein::estimate(kinds.front(), ctx);

  stein::CsvTable table;
  table.header = {"kind", "name", "value"};
  for (std::size_t j = 0; j < ds.column_names.size(); ++j) {
    table.rows.push_back({"coef", ds.column_names[j], stein::format_number(beta(j))});
  }
  table.rows.push_back({"diag", "estimator", std::string(stein::to_string(kinds.front()))});
  table.rows.push_back({"diag", "L_n", stein::format_number(ctx.L_n)});
  table.rows.push_back({"diag", "s2", stein::format_number(ctx.s2)});
  table.rows.push_back({"diag", "c_alpha", stein::format_number(ctx.c_alpha)});
  table.rows.push_back({"diag", "lambda", stein::format_number(ctx.lambda)});
  emit(stein::write_csv(table), args.out);
  return 0;
}

struct RiskArgs {
  int p = 10;
  int k = 3;
  double sigma = 10.0;
  double alpha = 0.05;
  std::vector<double> delta2;
  std::string out = "-";
};

int run_risk(const RiskArgs& args) {
  stein::RiskConfig cfg;
  cfg.p = args.p;
  cfg.k = args.k;
  cfg.sigma2 = args.sigma * args.sigma;
  cfg.c_alpha = stein::central_chisq_quantile(args.alpha, args.p);
  const auto grid = args.delta2.empty() ? stein::default_delta2_grid() : args.delta2;
  const auto curve = stein::risk_curve(cfg, grid);

  std::string breakeven = "nan";
  try {
    breakeven = stein::format_number(stein::ptle_breakeven(cfg));
  } catch (const stein::Error& e) {
    if (e.code() != stein::ErrorCode::NoRootInBracket) throw;
  }
  stein::CsvTable table;
  table.header = {"delta2", "r1", "r2", "r3", "r4", "r5", "breakeven"};
  for (const auto& pt : curve) {
    table.rows.push_back({stein::format_number(pt.delta2), stein::format_number(pt.r1),
                          stein::format_number(pt.r2), stein::format_number(pt.r3),
                          stein::format_number(pt.r4), stein::format_number(pt.r5), breakeven});
  }
  emit(stein::write_csv(table), args.out);
  return 0;
}

struct SimulateArgs {
  int n = 100;
  std::vector<int> p;
  std::vector<double> r;
  std::vector<double> sigma;
  std::vector<int> k;
  std::vector<double> delta2;
  int reps = 1000;
  double alpha = 0.05;
  std::uint64_t seed = stein::kDefaultSeed;
  std::vector<std::string> estimators;
  std::optional<double> fixed_lambda;
  bool sqrt_injection = false;
  bool fixed_design = false;
  bool quiet = false;
  int threads = 0;
  std::string out = "simulation";
};

int run_simulate(const SimulateArgs& args) {
  stein::SimCellConfig base;
  base.n = args.n;
  base.replications = args.reps;
  base.alpha = args.alpha;
  base.seed = args.seed;
  if (!args.estimators.empty()) base.estimators = parse_kinds(args.estimators);
  base.fixed_lambda = args.fixed_lambda;
  base.sqrt_injection = args.sqrt_injection;
  base.fixed_design = args.fixed_design;

  const auto pick = [](const auto& given, auto fallback) { return given.empty() ? fallback : given; };
  const auto grid = stein::make_grid(
      base, pick(args.r, std::vector<double>{0.0, 0.5, 0.9}), pick(args.p, std::vector<int>{10, 20, 50}),
      pick(args.sigma, std::vector<double>{10.0, 20.0}), pick(args.k, std::vector<int>{0, 1, 3, 5}),
      pick(args.delta2, stein::default_delta2_grid()));

  const auto rows = stein::run_grid(grid, stein::resolve_threads(args.threads), !args.quiet);
  emit(stein::sim_long_csv(rows), args.out + "_long.csv");
  emit(stein::sim_wide_csv(rows), args.out + "_wide.csv");
  for (const auto& row : rows) {
    if (!row.result) return kExitNumeric;
  }
  return 0;
}

struct CvArgs {
  std::string dataset;
  std::string response;
  std::size_t K = 10;
  int reps = 1000;
  double alpha = 0.05;
  std::uint64_t seed = stein::kDefaultSeed;
  std::vector<std::string> estimators;
  std::size_t inner_k = 5;
  int threads = 0;
  std::string out = "-";
};

int run_cv(const CvArgs& args) {
  const stein::Dataset ds = stein::load_dataset(
      args.dataset, args.response.empty() ? std::nullopt : std::optional<std::string>(args.response));
  stein::CvOptions options;
  options.K = args.K;
  options.repetitions = args.reps;
  options.alpha = args.alpha;
  options.seed = args.seed;
  if (!args.estimators.empty()) options.kinds = parse_kinds(args.estimators);
  options.inner_folds = args.inner_k;
  options.threads = stein::resolve_threads(args.threads);
  const auto report = stein::cv_prediction_error(ds, options);
  emit(stein::cv_report_csv({report}), args.out);
  return 0;
}

int run_datasets(const std::string& out) {
  stein::CsvTable table;
  table.header = {"name", "rows", "predictors", "response"};
  for (const auto& name : stein::bundled_dataset_names()) {
    const auto ds = stein::load_dataset(name);
    table.rows.push_back({name, std::to_string(ds.X.rows()), std::to_string(ds.X.cols()),
                          ds.response_name});
  }
  emit(stein::write_csv(table), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein-rule shrinkage of LASSO estimators: fits, risk curves, simulations and "
               "cross-validated prediction error"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit one estimator to a dataset");
  fit_cmd->add_option("--data,--dataset", fit.data, "Bundled dataset name or CSV path")->required();
  fit_cmd->add_option("--response", fit.response, "Response column (default: last column)");
  fit_cmd->add_option("--estimator", fit.estimator, "LSE, RE, PTE, JSE, PRSE, IPT, LE, PTLE, SLE, PSLE")
      ->required();
  fit_cmd->add_option("--alpha", fit.alpha, "Level of the preliminary test")->check(CLI::Range(0.0, 1.0));
  fit_cmd->add_option("--fixed-lambda,--lambda", fit.lambda, "Fixed LASSO penalty (skips CV)");
  fit_cmd->add_option("--inner-K", fit.inner_k, "Folds for lambda selection");
  fit_cmd->add_option("--seed", fit.seed, "Random seed");
  fit_cmd->add_option("--out", fit.out, "Output CSV path ('-' for stdout)");

  RiskArgs risk;
  auto* risk_cmd = app.add_subcommand("risk", "Asymptotic risk curves R1..R5 over divergence values");
  risk_cmd->add_option("--p", risk.p, "Number of coefficients")->check(CLI::PositiveNumber);
  risk_cmd->add_option("--k", risk.k, "Number of non-null coefficients")->check(CLI::NonNegativeNumber);
  risk_cmd->add_option("--sigma", risk.sigma, "Error standard deviation")->check(CLI::PositiveNumber);
  risk_cmd->add_option("--alpha", risk.alpha, "Level of the preliminary test");
  risk_cmd->add_option("--delta2", risk.delta2, "Divergence values (repeatable)");
  risk_cmd->add_option("--out", risk.out, "Output CSV path ('-' for stdout)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo relative efficiencies");
  sim_cmd->add_option("--n", sim.n, "Sample size");
  sim_cmd->add_option("--p", sim.p, "Number of coefficients (repeatable)");
  sim_cmd->add_option("--r", sim.r, "Predictor correlation (repeatable)");
  sim_cmd->add_option("--sigma", sim.sigma, "Error standard deviation (repeatable)");
  sim_cmd->add_option("--k", sim.k, "Non-null coefficients (repeatable)");
  sim_cmd->add_option("--delta2", sim.delta2, "Divergence values (repeatable)");
  sim_cmd->add_option("--reps", sim.reps, "Replications per cell")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--alpha", sim.alpha, "Level of the preliminary test");
  sim_cmd->add_option("--seed", sim.seed, "Random seed");
  sim_cmd->add_option("--estimator", sim.estimators, "Estimators to report (repeatable)");
  sim_cmd->add_option("--fixed-lambda", sim.fixed_lambda, "Fixed LASSO penalty (skips CV)");
  sim_cmd->add_flag("--sqrt-injection", sim.sqrt_injection, "Inject sqrt(delta2) instead of delta2");
  sim_cmd->add_flag("--fixed-design", sim.fixed_design, "Reuse one design per cell");
  sim_cmd->add_flag("--quiet", sim.quiet, "No progress on standard error");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (default: STEIN_LASSO_THREADS or all cores)");
  sim_cmd->add_option("--out", sim.out, "Output prefix; writes <out>_long.csv and <out>_wide.csv");

  CvArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "Repeated K-fold prediction error on a dataset");
  cv_cmd->add_option("--dataset,--data", cv.dataset, "Bundled dataset name or CSV path")->required();
  cv_cmd->add_option("--response", cv.response, "Response column (default: last column)");
  cv_cmd->add_option("--K", cv.K, "Number of folds");
  cv_cmd->add_option("--reps", cv.reps, "Repetitions")->check(CLI::PositiveNumber);
  cv_cmd->add_option("--alpha", cv.alpha, "Level of the preliminary test");
  cv_cmd->add_option("--seed", cv.seed, "Random seed");
  cv_cmd->add_option("--estimator", cv.estimators, "Estimators (repeatable; default LE PTLE SLE PSLE)");
  cv_cmd->add_option("--inner-K", cv.inner_k, "Folds for lambda selection within each training split");
  cv_cmd->add_option("--threads", cv.threads, "Worker threads (default: STEIN_LASSO_THREADS or all cores)");
  cv_cmd->add_option("--out", cv.out, "Output CSV path ('-' for stdout)");

  std::string datasets_out = "-";
  auto* ds_cmd = app.add_subcommand("datasets", "List bundled datasets");
  ds_cmd->add_option("--out", datasets_out, "Output CSV path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*risk_cmd) return run_risk(risk);
    if (*sim_cmd) return run_simulate(sim);
    if (*cv_cmd) return run_cv(cv);
    if (*ds_cmd) return run_datasets(datasets_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  } catch (const stein::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return stein::is_input_error(e.code()) ? kExitInput : kExitNumeric;
  }
  return kExitInput;
}
