#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stein_lasso/estimators.hpp"
#include "stein_lasso/folds.hpp"
#include "stein_lasso/linalg.hpp"
#include "stein_lasso/random.hpp"

namespace stein {

/// Predictors are stored centered; the response is kept on its raw scale.
struct Dataset {
  std::string name;
  Matrix X;
  Vector y;
  std::vector<std::string> column_names;  // predictors, in column order
  std::string response_name;
  Vector column_means;  // subtracted from the raw predictors
};

std::vector<std::string> bundled_dataset_names();

/// CSV text of a bundled dataset, or nullopt.
std::optional<std::string_view> bundled_csv(std::string_view name);

/// Parses CSV text with a header row. The response is the named column, or
/// the last column when none is given.
Dataset parse_dataset(std::string_view csv_text, std::string name,
                      const std::optional<std::string>& response = std::nullopt);

/// Bundled name (galapagos, state, longley) or a path to a CSV file.
Dataset load_dataset(const std::string& path_or_name,
                     const std::optional<std::string>& response = std::nullopt);

struct CvOptions {
  std::size_t K = 10;
  int repetitions = 1000;
  double alpha = 0.05;
  std::uint64_t seed = kDefaultSeed;
  std::vector<EstimatorKind> kinds = {EstimatorKind::LE, EstimatorKind::PTLE, EstimatorKind::SLE,
                                      EstimatorKind::PSLE};
  std::size_t inner_folds = 5;
  int threads = 1;
};

struct EstimatorCv {
  EstimatorKind kind;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> per_repetition;  // summed squared prediction error
};

struct CvReport {
  std::string dataset;
  std::size_t K = 0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  // Column label used by the published tables for these figures. No
  // correction is applied; the label is carried for reference only.
  std::string label = "Bias Corrected CVE";
  std::vector<EstimatorCv> estimators;

  const EstimatorCv& at(EstimatorKind kind) const;
};

/// Repeated K-fold prediction error. Each repetition draws a fresh split;
/// every training split gets its own fit (with nested cross-validation for
/// lambda) and the squared errors on all held-out rows are summed.
CvReport cv_prediction_error(const Dataset& ds, const CvOptions& options);

/// Columns: dataset, estimator, mean_cve, sd_cve, reps, K, seed.
std::string cv_report_csv(const std::vector<CvReport>& reports);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1), 0 for one value
};

MeanSd mean_sd(const std::vector<double>& values);

}  // namespace stein
