#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aeropipe/config.hpp"
#include "aeropipe/ml/forest.hpp"
#include "aeropipe/ml/knn.hpp"
#include "aeropipe/ml/linear.hpp"
#include "aeropipe/ml/logistic.hpp"
#include "aeropipe/ml/tree.hpp"

namespace aeropipe::ml {

enum class ModelKind {
  LinearRegression,
  LogisticRegression,
  DecisionTreeReg,
  DecisionTreeClf,
  RandomForestReg,
  RandomForestClf,
  Knn,
  GaussianNB
};

Task task_of(ModelKind kind) noexcept;
std::string_view model_name(ModelKind kind) noexcept;
/// Config tokens: random_forest, linear_regression, decision_tree,
/// logistic_regression, knn, naive_bayes. Resolved against `task`.
ModelKind parse_model_kind(std::string_view token, Task task);

/// Every tunable in one place; defaults live in core/data/defaults.ini.
struct Hyperparameters {
  std::size_t rf_trees = 100;
  MaxFeatures rf_max_features = MaxFeatures::Sqrt;
  int tree_max_depth = 0;
  std::size_t tree_min_samples_leaf = 1;
  std::size_t knn_k = 5;
  LogisticParams logistic{};
  std::size_t smote_k = 5;

  /// Reads the [model] section.
  static Hyperparameters from_config(const KeyValueConfig& cfg);
};

/// A fitted predictor with the configuration and seed that produced it.
struct TrainedModel {
  ModelKind kind;
  std::uint64_t seed = 0;
  Hyperparameters hyperparameters;
  std::variant<LinearRegression, DecisionTree, RandomForest, LogisticRegression, Knn, GaussianNB>
      fitted;

  /// Regression values, or class labels as doubles.
  std::vector<double> predict(const Matrix& x) const;
};

/// Classification kinds take non-negative integer labels in `y`.
TrainedModel fit_model(ModelKind kind, const Matrix& x, std::span<const double> y,
                       const Hyperparameters& hp, std::uint64_t seed);

}  // namespace aeropipe::ml
