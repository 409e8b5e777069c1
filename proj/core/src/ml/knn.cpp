#include "aeropipe/ml/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

Knn Knn::fit(Matrix x, std::vector<double> y, const KnnParams& params) {
  if (y.size() != x.rows()) throw InvalidArgument("target length does not match rows");
  if (params.k == 0 || params.k > x.rows()) {
    throw InvalidArgument("k must lie in [1, " + std::to_string(x.rows()) + "], got " +
                          std::to_string(params.k));
  }
  Knn model;
  model.params_ = params;
  if (params.task == Task::Classification) {
    for (double v : y) {
      if (v < 0 || v != std::floor(v)) {
        throw InvalidArgument("class labels must be non-negative integers");
      }
    }
    model.n_classes_ = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
  }
  model.x_ = std::move(x);
  model.y_ = std::move(y);
  return model;
}

std::vector<std::size_t> Knn::neighbours(std::span<const double> row) const {
  std::vector<std::pair<double, std::size_t>> dist(x_.rows());
  for (std::size_t i = 0; i < x_.rows(); ++i) dist[i] = {squared_distance(row, x_.row(i)), i};
  const auto k = static_cast<std::ptrdiff_t>(params_.k);
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<std::size_t> out(params_.k);
  for (std::size_t i = 0; i < params_.k; ++i) out[i] = dist[i].second;
  return out;
}

double Knn::predict_row(std::span<const double> row) const {
  auto nn = neighbours(row);
  if (params_.task == Task::Regression) {
    double s = 0;
    for (auto i : nn) s += y_[i];
    return s / double(nn.size());
  }
  std::vector<std::size_t> votes(n_classes_, 0);
  for (auto i : nn) ++votes[static_cast<std::size_t>(y_[i])];
  return majority_label(votes);
}

std::vector<double> Knn::predict(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

GaussianNB GaussianNB::fit(const Matrix& x, std::span<const int> y) {
  if (y.size() != x.rows()) throw InvalidArgument("target length does not match rows");
  if (y.empty()) throw InvalidArgument("naive Bayes needs at least one sample");
  const int max_label = *std::max_element(y.begin(), y.end());
  if (*std::min_element(y.begin(), y.end()) < 0) {
    throw InvalidArgument("class labels must be non-negative");
  }
  const std::size_t d = x.cols();
  GaussianNB model;
  model.n_labels_ = static_cast<std::size_t>(max_label) + 1;
  for (int label = 0; label <= max_label; ++label) {
    std::size_t count = 0;
    std::vector<double> sum(d, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (y[i] != label) continue;
      ++count;
      auto r = x.row(i);
      for (std::size_t j = 0; j < d; ++j) sum[j] += r[j];
    }
    if (count == 0) continue;
    ClassStats cs{label, std::log(double(count) / double(x.rows())), {}, std::vector<double>(d, 0.0)};
    cs.mean = sum;
    for (auto& m : cs.mean) m /= double(count);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (y[i] != label) continue;
      auto r = x.row(i);
      for (std::size_t j = 0; j < d; ++j) cs.var[j] += (r[j] - cs.mean[j]) * (r[j] - cs.mean[j]);
    }
    for (auto& v : cs.var) v = std::max(v / double(count), kVarianceFloor);
    model.classes_.push_back(std::move(cs));
  }
  return model;
}

std::vector<double> GaussianNB::predict_proba_row(std::span<const double> row) const {
  constexpr double kLog2Pi = 1.8378770664093453;
  std::vector<double> log_post(classes_.size());
  double max_lp = -INFINITY;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    const auto& cs = classes_[c];
    double lp = cs.log_prior;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double diff = row[j] - cs.mean[j];
      lp -= 0.5 * (kLog2Pi + std::log(cs.var[j]) + diff * diff / cs.var[j]);
    }
    log_post[c] = lp;
    max_lp = std::max(max_lp, lp);
  }
  double sum = 0;
  for (auto& lp : log_post) sum += (lp = std::exp(lp - max_lp));
  std::vector<double> out(n_labels_, 0.0);
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    out[static_cast<std::size_t>(classes_[c].label)] = log_post[c] / sum;
  }
  return out;
}

int GaussianNB::predict_row(std::span<const double> row) const {
  auto p = predict_proba_row(row);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<int> GaussianNB::predict(const Matrix& x) const {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(x.row(i));
  return out;
}

}  // namespace aeropipe::ml
