#include "aeropipe/ml/matrix.hpp"

#include <cmath>
#include <set>

#include "aeropipe/errors.hpp"

namespace aeropipe::ml {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data,
               std::vector<std::string> names)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw InvalidArgument("matrix data size mismatch");
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("matrix entries must be finite");
  }
  if (!names.empty()) set_names(std::move(names));
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows,
                         std::vector<std::string> names) {
  const std::size_t cols = rows.empty() ? names.size() : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidArgument("ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data), std::move(names));
}

void Matrix::set_names(std::vector<std::string> names) {
  if (names.size() != cols_) throw InvalidArgument("column name count mismatch");
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
    throw InvalidArgument("column names must be unique");
  }
  names_ = std::move(names);
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw InvalidArgument("row width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  out.names_ = names_;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Standardizer Standardizer::fit(const Matrix& x) {
  Standardizer s;
  const std::size_t n = x.rows(), d = x.cols();
  s.mean_.assign(d, 0.0);
  s.scale_.assign(d, 1.0);
  if (n == 0) return s;
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += x(i, j);
    const double mean = sum / double(n);
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
    const double sd = std::sqrt(ss / double(n));
    s.mean_[j] = mean;
    s.scale_[j] = sd > 0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::transform(const Matrix& x) const {
  if (x.cols() != mean_.size()) throw InvalidArgument("standardizer width mismatch");
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = (r[j] - mean_[j]) / scale_[j];
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace aeropipe::ml
