#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aeropipe/ml/tree.hpp"

namespace aeropipe::ml {

enum class MaxFeatures { Sqrt, All };

struct ForestParams {
  Task task = Task::Regression;
  std::size_t n_trees = 100;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  bool bootstrap = true;
  int max_depth = 0;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 42;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Seed of tree `index` derived from the forest seed (splitmix64).
std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t index);

/// Bagged CART ensemble. Every tree owns a seed derived from the forest seed,
/// so the fitted forest does not depend on how trees are scheduled.
class RandomForest {
 public:
  static RandomForest fit(const Matrix& x, std::span<const double> y, const ForestParams& params);

  /// Mean of the trees (regression) or plurality vote, lowest label on ties.
  double predict_row(std::span<const double> row) const;
  std::vector<double> predict(const Matrix& x) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

 private:
  ForestParams params_;
  std::vector<DecisionTree> trees_;
  std::size_t n_classes_ = 0;
};

}  // namespace aeropipe::ml
