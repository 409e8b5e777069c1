#pragma once

#include <span>
#include <vector>

#include "aeropipe/ml/matrix.hpp"

namespace aeropipe::ml {

/// Ordinary least squares with an intercept, solved by Householder QR.
class LinearRegression {
 public:
  /// Throws SingularMatrixError naming the columns that are linearly
  /// dependent on earlier ones (the intercept counts as column zero), and
  /// InvalidArgument when there are fewer rows than coefficients.
  static LinearRegression fit(const Matrix& x, std::span<const double> y);

  double intercept() const noexcept { return coef_.front(); }
  /// Slopes in column order.
  std::span<const double> slopes() const noexcept { return {coef_.data() + 1, coef_.size() - 1}; }
  /// Intercept first, then slopes.
  const std::vector<double>& coefficients() const noexcept { return coef_; }

  double predict_row(std::span<const double> row) const;
  std::vector<double> predict(const Matrix& x) const;

 private:
  std::vector<double> coef_;
};

}  // namespace aeropipe::ml
