#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aeropipe/config.hpp"
#include "aeropipe/ml/metrics.hpp"
#include "aeropipe/ml/model.hpp"
#include "aeropipe/ml/split.hpp"
#include "aeropipe/model.hpp"

namespace aeropipe::ml {

struct ExperimentSpec {
  Task task = Task::Regression;
  std::vector<ModelKind> models;
  std::vector<bool> smote_modes{false};
  SplitConfig split{};
  std::uint64_t seed = 42;
  Hyperparameters hyperparameters{};
  /// Columns that must be present; empty means the twelve pollutants plus
  /// the target.
  std::vector<Column> required;

  /// [analyze] task, models, smote (off/on list), test_fraction, seed,
  /// required ("pollutants" or a column list); [model] hyperparameters.
  static ExperimentSpec from_config(const KeyValueConfig& cfg);
  /// All three regression models, with and without SMOTE.
  static ExperimentSpec regression_suite();
  /// Random forest, logistic regression, decision tree, KNN and naive Bayes,
  /// with and without SMOTE.
  static ExperimentSpec classification_suite();
};

struct EvalReport {
  ModelKind kind;
  bool smote = false;
  std::optional<RegressionMetrics> regression;
  std::optional<ClassificationMetrics> classification;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  int rank = 0;  ///< 1 = best
  bool best = false;
};

struct ExperimentResult {
  Task task = Task::Regression;
  std::size_t n_records = 0;  ///< after drop_incomplete
  std::vector<EvalReport> reports;

  const EvalReport* find(ModelKind kind, bool smote) const;
  const EvalReport& best() const;
  std::string to_csv() const;
  /// Human-facing comparison table.
  std::string to_table() const;
};

/// Training and test matrices for one SMOTE setting. Features are
/// standardized with statistics of the original training rows. SMOTE rows,
/// when enabled, are appended to the training side only.
struct ExperimentFolds {
  Matrix x_train;
  std::vector<double> y_train;
  Matrix x_test;
  std::vector<double> y_test;
  std::vector<std::size_t> test_rows;  ///< indices into the filtered records
  std::size_t synthetic = 0;
};

/// Filtered records with every required column present.
std::vector<CityDayRecord> preprocess(const std::vector<CityDayRecord>& records,
                                      const ExperimentSpec& spec);
ExperimentFolds build_folds(const std::vector<CityDayRecord>& filtered, const ExperimentSpec& spec,
                            bool smote);

/// One report per (smote mode, model). Regression predictions are clipped at
/// zero (AQI is non-negative). Reports are ranked by MAE (regression) or
/// accuracy (classification); ties keep spec order. Throws InvalidArgument
/// when nothing survives preprocessing.
ExperimentResult run_experiment(const std::vector<CityDayRecord>& records,
                                const ExperimentSpec& spec);

}  // namespace aeropipe::ml
