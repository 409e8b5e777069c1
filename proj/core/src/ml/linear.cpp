#include "aeropipe/ml/linear.hpp"

#include <cmath>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

LinearRegression LinearRegression::fit(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows(), p = x.cols() + 1;
  if (y.size() != n) throw InvalidArgument("target length does not match rows");
  if (n < p) {
    throw InvalidArgument("linear regression needs at least " + std::to_string(p) +
                          " rows, got " + std::to_string(n));
  }

  // Column-major design matrix with a leading column of ones.
  std::vector<double> a(n * p);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[c * n + r]; };
  for (std::size_t r = 0; r < n; ++r) {
    at(r, 0) = 1.0;
    for (std::size_t c = 1; c < p; ++c) at(r, c) = x(r, c - 1);
  }
  std::vector<double> col_norm(p);
  for (std::size_t c = 0; c < p; ++c) {
    double s = 0;
    for (std::size_t r = 0; r < n; ++r) s += at(r, c) * at(r, c);
    col_norm[c] = std::sqrt(s);
  }
  std::vector<double> qtb(y.begin(), y.end());
  std::vector<double> diag(p);
  std::vector<double> v(n);

  for (std::size_t k = 0; k < p; ++k) {
    double norm = 0;
    for (std::size_t r = k; r < n; ++r) norm += at(r, k) * at(r, k);
    norm = std::sqrt(norm);
    const double alpha = at(k, k) > 0 ? -norm : norm;
    diag[k] = alpha;
    if (norm == 0) continue;
    double vnorm2 = 0;
    for (std::size_t r = k; r < n; ++r) {
      v[r] = at(r, k) - (r == k ? alpha : 0.0);
      vnorm2 += v[r] * v[r];
    }
    if (vnorm2 == 0) continue;
    for (std::size_t c = k; c < p; ++c) {
      double dot = 0;
      for (std::size_t r = k; r < n; ++r) dot += v[r] * at(r, c);
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t r = k; r < n; ++r) at(r, c) -= f * v[r];
    }
    double dot = 0;
    for (std::size_t r = k; r < n; ++r) dot += v[r] * qtb[r];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t r = k; r < n; ++r) qtb[r] -= f * v[r];
  }

  std::vector<std::string> dependent;
  for (std::size_t k = 0; k < p; ++k) {
    if (std::abs(diag[k]) <= 1e-10 * std::max(col_norm[k], 1e-300)) {
      if (k == 0) {
        dependent.push_back("(intercept)");
      } else if (!x.names().empty()) {
        dependent.push_back(x.names()[k - 1]);
      } else {
        dependent.push_back("column " + std::to_string(k - 1));
      }
    }
  }
  if (!dependent.empty()) {
    std::string msg = "design matrix is rank deficient; dependent columns:";
    for (const auto& d : dependent) msg += " " + d;
    throw SingularMatrixError(msg);
  }

  LinearRegression model;
  model.coef_.assign(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double s = qtb[k];
    for (std::size_t c = k + 1; c < p; ++c) s -= at(k, c) * model.coef_[c];
    model.coef_[k] = s / diag[k];
  }
  return model;
}

double LinearRegression::predict_row(std::span<const double> row) const {
  double s = coef_[0];
  for (std::size_t j = 0; j < row.size(); ++j) s += coef_[j + 1] * row[j];
  return s;
}

std::vector<double> LinearRegression::predict(const Matrix& x) const {
  if (x.cols() + 1 != coef_.size()) throw InvalidArgument("feature count mismatch");
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

}  // namespace aeropipe::ml
