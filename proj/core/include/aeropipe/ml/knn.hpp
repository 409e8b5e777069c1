#pragma once

#include <span>
#include <vector>

#include "aeropipe/ml/matrix.hpp"
#include "aeropipe/ml/tree.hpp"

namespace aeropipe::ml {

struct KnnParams {
  std::size_t k = 5;
  Task task = Task::Classification;
};

/// Brute-force k-nearest neighbours under Euclidean distance. Features are
/// used as given; the experiment pipeline standardizes them first.
/// Distance ties go to the lower training index, vote ties to the lowest label.
class Knn {
 public:
  /// Throws InvalidArgument when k is 0 or exceeds the training size.
  static Knn fit(Matrix x, std::vector<double> y, const KnnParams& params);

  /// Training row indices of the k nearest neighbours, nearest first.
  std::vector<std::size_t> neighbours(std::span<const double> row) const;
  double predict_row(std::span<const double> row) const;
  std::vector<double> predict(const Matrix& x) const;

 private:
  KnnParams params_;
  Matrix x_;
  std::vector<double> y_;
  std::size_t n_classes_ = 0;
};

/// Gaussian naive Bayes with per-class, per-feature variances floored at
/// 1e-9.
class GaussianNB {
 public:
  static constexpr double kVarianceFloor = 1e-9;

  static GaussianNB fit(const Matrix& x, std::span<const int> y);

  /// Posterior over labels 0..max_label; labels absent from training get 0.
  std::vector<double> predict_proba_row(std::span<const double> row) const;
  int predict_row(std::span<const double> row) const;
  std::vector<int> predict(const Matrix& x) const;

 private:
  struct ClassStats {
    int label;
    double log_prior;
    std::vector<double> mean;
    std::vector<double> var;
  };
  std::vector<ClassStats> classes_;
  std::size_t n_labels_ = 0;
};

}  // namespace aeropipe::ml
