#include "aeropipe/ml/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

namespace {

void softmax_scores(std::span<const double> w, std::size_t k, std::size_t d,
                    std::span<const double> row, std::span<double> out) {
  double max_z = -INFINITY;
  for (std::size_t c = 0; c < k; ++c) {
    const double* wc = w.data() + c * (d + 1);
    double z = wc[0];
    for (std::size_t j = 0; j < d; ++j) z += wc[j + 1] * row[j];
    out[c] = z;
    max_z = std::max(max_z, z);
  }
  double sum = 0;
  for (std::size_t c = 0; c < k; ++c) {
    out[c] = std::exp(out[c] - max_z);
    sum += out[c];
  }
  for (std::size_t c = 0; c < k; ++c) out[c] /= sum;
}

}  // namespace

double LogisticRegression::loss_and_gradient(const Matrix& x, std::span<const int> y,
                                             std::size_t k, std::span<const double> w, double l2,
                                             std::span<double> grad) {
  const std::size_t n = x.rows(), d = x.cols();
  if (w.size() != k * (d + 1) || grad.size() != w.size()) {
    throw InvalidArgument("weight/gradient size mismatch");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> p(k);
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    softmax_scores(w, k, d, row, p);
    const auto yi = static_cast<std::size_t>(y[i]);
    loss -= std::log(std::max(p[yi], 1e-300));
    for (std::size_t c = 0; c < k; ++c) {
      const double err = p[c] - (c == yi ? 1.0 : 0.0);
      double* g = grad.data() + c * (d + 1);
      g[0] += err;
      for (std::size_t j = 0; j < d; ++j) g[j + 1] += err * row[j];
    }
  }
  const double inv_n = 1.0 / double(n);
  loss *= inv_n;
  for (auto& g : grad) g *= inv_n;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 1; j <= d; ++j) {
      const double wv = w[c * (d + 1) + j];
      loss += 0.5 * l2 * wv * wv;
      grad[c * (d + 1) + j] += l2 * wv;
    }
  }
  return loss;
}

LogisticRegression LogisticRegression::fit(const Matrix& x, std::span<const int> y,
                                           const LogisticParams& params) {
  if (y.size() != x.rows()) throw InvalidArgument("target length does not match rows");
  std::set<int> present(y.begin(), y.end());
  if (present.size() < 2) throw InvalidArgument("logistic regression needs at least two classes");
  if (*present.begin() < 0) throw InvalidArgument("class labels must be non-negative");

  LogisticRegression model;
  model.n_classes_ = static_cast<std::size_t>(*present.rbegin()) + 1;
  model.n_features_ = x.cols();
  model.weights_.assign(model.n_classes_ * (x.cols() + 1), 0.0);
  std::vector<double> grad(model.weights_.size());
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    loss_and_gradient(x, y, model.n_classes_, model.weights_, params.l2, grad);
    for (std::size_t i = 0; i < grad.size(); ++i) model.weights_[i] -= params.learning_rate * grad[i];
  }
  return model;
}

std::vector<double> LogisticRegression::predict_proba_row(std::span<const double> row) const {
  std::vector<double> p(n_classes_);
  softmax_scores(weights_, n_classes_, n_features_, row, p);
  return p;
}

int LogisticRegression::predict_row(std::span<const double> row) const {
  auto p = predict_proba_row(row);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<int> LogisticRegression::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

}  // namespace aeropipe::ml
