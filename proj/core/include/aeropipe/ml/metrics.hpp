#pragma once

#include <span>

namespace aeropipe::ml {

struct RegressionMetrics {
  double mae = 0;
  double rmse = 0;
  double rmsle = 0;
  double r2 = 0;
};

/// Accuracy and support-weighted F1, both in percent.
struct ClassificationMetrics {
  double accuracy = 0;
  double f1 = 0;
};

double mean_absolute_error(std::span<const double> y_true, std::span<const double> y_pred);
double root_mean_squared_error(std::span<const double> y_true, std::span<const double> y_pred);
/// sqrt(mean (log1p(pred) - log1p(true))^2). Throws InvalidArgument on negatives.
double root_mean_squared_log_error(std::span<const double> y_true,
                                   std::span<const double> y_pred);
/// 1 - SS_res / SS_tot. Throws UndefinedMetricError when y_true is constant.
double r2_score(std::span<const double> y_true, std::span<const double> y_pred);

RegressionMetrics regression_metrics(std::span<const double> y_true,
                                     std::span<const double> y_pred);

double accuracy_percent(std::span<const int> y_true, std::span<const int> y_pred);
/// Per-class F1 averaged with weights equal to each class's support in y_true.
double weighted_f1_percent(std::span<const int> y_true, std::span<const int> y_pred);

ClassificationMetrics classification_metrics(std::span<const int> y_true,
                                             std::span<const int> y_pred);

}  // namespace aeropipe::ml
