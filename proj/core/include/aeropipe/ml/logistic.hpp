#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aeropipe/ml/matrix.hpp"

namespace aeropipe::ml {

struct LogisticParams {
  std::size_t epochs = 300;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::uint64_t seed = 42;  ///< recorded; weights start at zero
};

/// Multinomial (softmax) logistic regression trained by full-batch gradient
/// descent on mean cross-entropy plus (l2/2)*||W||^2 over non-bias weights.
/// Expects standardized features.
class LogisticRegression {
 public:
  /// Throws InvalidArgument when fewer than two classes are present.
  static LogisticRegression fit(const Matrix& x, std::span<const int> y,
                                const LogisticParams& params);

  /// Objective and its gradient at `weights` (row-major, n_classes x
  /// (features+1), bias in column 0). `grad` must have the same size.
  static double loss_and_gradient(const Matrix& x, std::span<const int> y, std::size_t n_classes,
                                  std::span<const double> weights, double l2,
                                  std::span<double> grad);

  std::vector<double> predict_proba_row(std::span<const double> row) const;
  int predict_row(std::span<const double> row) const;
  std::vector<int> predict(const Matrix& x) const;

  std::size_t n_classes() const noexcept { return n_classes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::size_t n_classes_ = 0;
  std::size_t n_features_ = 0;
  std::vector<double> weights_;
};

}  // namespace aeropipe::ml
