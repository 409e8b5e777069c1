#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "aeropipe/ml/matrix.hpp"

namespace aeropipe::ml {

enum class Task { Regression, Classification };

struct TreeParams {
  Task task = Task::Regression;
  int max_depth = 0;                 ///< 0 = unlimited
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;      ///< features tried per split; 0 = all
};

/// CART tree. Regression minimises the summed squared error of the children,
/// classification the support-weighted Gini impurity. Thresholds are midpoints
/// between consecutive distinct values and rows with x <= threshold go left.
/// Equal-impurity candidates resolve to the lowest feature, then the lowest
/// threshold. Class labels are non-negative integers stored as doubles.
class DecisionTree {
 public:
  struct Node {
    int feature = -1;  ///< -1 for a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  ///< leaf prediction (mean or majority label)
    std::size_t samples = 0;
  };

  static DecisionTree fit(const Matrix& x, std::span<const double> y, const TreeParams& params);

  /// Fits on a multiset of row indices (bootstrap samples may repeat rows).
  /// `rng` drives feature subsampling when params.max_features is set.
  static DecisionTree fit_rows(const Matrix& x, std::span<const double> y,
                               std::vector<std::size_t> rows, const TreeParams& params,
                               std::mt19937_64& rng);

  double predict_row(std::span<const double> row) const;
  std::vector<double> predict(const Matrix& x) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  int depth() const noexcept { return depth_; }
  std::size_t leaf_count() const noexcept;
  Task task() const noexcept { return params_.task; }

 private:
  struct Builder;
  TreeParams params_;
  std::vector<Node> nodes_;
  int depth_ = 0;
};

/// Smallest label among those with the highest count.
int majority_label(std::span<const std::size_t> counts);

}  // namespace aeropipe::ml
