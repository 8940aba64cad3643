#include "stein_lasso/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stein_lasso/csv.hpp"
#include "stein_lasso/error.hpp"
#include "stein_lasso/parallel.hpp"

namespace stein {

namespace detail {
extern const std::string_view kGalapagosCsv;
extern const std::string_view kStateCsv;
extern const std::string_view kLongleyCsv;
}  // namespace detail

namespace {

bool is_missing(std::string_view field) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) {
    field.remove_prefix(1);
  }
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) {
    field.remove_suffix(1);
  }
  return field.empty() || field == "NA" || field == "NaN" || field == "nan";
}

}  // namespace

std::vector<std::string> bundled_dataset_names() { return {"galapagos", "state", "longley"}; }

std::optional<std::string_view> bundled_csv(std::string_view name) {
  if (name == "galapagos") return detail::kGalapagosCsv;
  if (name == "state") return detail::kStateCsv;
  if (name == "longley") return detail::kLongleyCsv;
  return std::nullopt;
}

Dataset parse_dataset(std::string_view csv_text, std::string name,
                      const std::optional<std::string>& response) {
  const CsvTable table = parse_csv(csv_text);
  if (table.header.size() < 2) {
    throw Error(ErrorCode::ParseError, name + ": need at least one predictor and a response");
  }
  if (table.rows.empty()) throw Error(ErrorCode::ParseError, name + ": no data rows");
  const std::size_t response_col = response ? table.column(*response) : table.header.size() - 1;

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto p = static_cast<Eigen::Index>(table.header.size() - 1);
  Matrix raw(n, p);
  Dataset ds;
  ds.name = std::move(name);
  ds.y.resize(n);
  ds.response_name = table.header[response_col];
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != response_col) ds.column_names.push_back(table.header[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index j = 0;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      const std::string& field = table.rows[i][c];
      // Rows are reported 1-based counting the header, columns 1-based.
      const std::string where = ds.name + " row " + std::to_string(i + 2) + ", column " +
                                std::to_string(c + 1) + " (" + table.header[c] + ")";
      if (is_missing(field)) throw Error(ErrorCode::MissingValues, "missing value at " + where);
      double value = 0.0;
      try {
        value = parse_number(field);
      } catch (const Error&) {
        throw Error(ErrorCode::ParseError, "non-numeric value '" + field + "' at " + where);
      }
      if (!std::isfinite(value)) throw Error(ErrorCode::ParseError, "non-finite value at " + where);
      if (c == response_col) {
        ds.y(i) = value;
      } else {
        raw(i, j++) = value;
      }
    }
  }
  auto [centered, means] = center_columns(raw);
  ds.X = std::move(centered);
  ds.column_means = std::move(means);
  return ds;
}

Dataset load_dataset(const std::string& path_or_name, const std::optional<std::string>& response) {
  std::string lowered = path_or_name;
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (const auto text = bundled_csv(lowered)) return parse_dataset(*text, lowered, response);

  std::ifstream in(path_or_name, std::ios::binary);
  if (!in || std::filesystem::is_directory(path_or_name)) {
    throw Error(ErrorCode::FileNotFound, "cannot open dataset '" + path_or_name + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), std::filesystem::path(path_or_name).stem().string(), response);
}

const EstimatorCv& CvReport::at(EstimatorKind kind) const {
  for (const auto& e : estimators) {
    if (e.kind == kind) return e;
  }
  throw Error(ErrorCode::InvalidArgument,
              std::string(to_string(kind)) + " is not part of this report");
}

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (const double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

CvReport cv_prediction_error(const Dataset& ds, const CvOptions& options) {
  if (options.repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  if (options.kinds.empty()) throw Error(ErrorCode::InvalidArgument, "no estimators requested");
  const auto n = static_cast<std::size_t>(ds.X.rows());
  const auto p = static_cast<std::size_t>(ds.X.cols());
  if (options.K < 2 || options.K > n) {
    throw Error(ErrorCode::InvalidK, "K must satisfy 2 <= K <= n (K=" + std::to_string(options.K) +
                                         ", n=" + std::to_string(n) + ")");
  }
  // The largest fold has ceil(n / K) rows, leaving the smallest training split.
  const std::size_t smallest_train = n - (n + options.K - 1) / options.K;
  if (smallest_train <= p) {
    throw Error(ErrorCode::SplitTooSmall, "a training split has " + std::to_string(smallest_train) +
                                              " rows for " + std::to_string(p) + " predictors");
  }

  const std::size_t n_kinds = options.kinds.size();
  // sse[rep][kind]
  std::vector<std::vector<double>> sse(options.repetitions, std::vector<double>(n_kinds, 0.0));
  parallel_for(static_cast<std::size_t>(options.repetitions), options.threads, [&](std::size_t rep) {
    Rng rng = make_stream(options.seed, {rep});
    const auto folds = kfold_split(n, options.K, rng);
    for (const auto& test : folds) {
      const Fold train = complement(test, n);
      LassoConfig lasso;
      lasso.cv_folds = options.inner_folds;
      lasso.seed = rng();
      const FitContext ctx =
          build_context(ds.X(train, Eigen::all), ds.y(train), options.alpha, lasso);
      const Matrix x_test = ds.X(test, Eigen::all);
      const Vector y_test = ds.y(test);
      for (std::size_t k = 0; k < n_kinds; ++k) {
        const Vector beta = estimate(options.kinds[k], ctx);
        sse[rep][k] += (y_test - ctx.predict(x_test, beta)).squaredNorm();
      }
    }
  });

  CvReport report;
  report.dataset = ds.name;
  report.K = options.K;
  report.repetitions = options.repetitions;
  report.seed = options.seed;
  for (std::size_t k = 0; k < n_kinds; ++k) {
    EstimatorCv e{options.kinds[k], 0.0, 0.0, {}};
    e.per_repetition.reserve(options.repetitions);
    for (const auto& row : sse) e.per_repetition.push_back(row[k]);
    const MeanSd stats = mean_sd(e.per_repetition);
    e.mean = stats.mean;
    e.sd = stats.sd;
    report.estimators.push_back(std::move(e));
  }
  return report;
}

std::string cv_report_csv(const std::vector<CvReport>& reports) {
  CsvTable table;
  table.header = {"dataset", "estimator", "mean_cve", "sd_cve", "reps", "K", "seed"};
  for (const auto& report : reports) {
    for (const auto& e : report.estimators) {
      table.rows.push_back({report.dataset, std::string(to_string(e.kind)), format_number(e.mean),
                            format_number(e.sd), std::to_string(report.repetitions),
                            std::to_string(report.K), std::to_string(report.seed)});
    }
  }
  return write_csv(table);
}

}  // namespace stein
