#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace aeropipe::ml {

/// Row-major dense matrix of finite doubles with optional column names.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data,
         std::vector<std::string> names = {});
  static Matrix from_rows(const std::vector<std::vector<double>>& rows,
                          std::vector<std::string> names = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Throws InvalidArgument on a size mismatch or duplicate names.
  void set_names(std::vector<std::string> names);

  void append_row(std::span<const double> values);
  Matrix select_rows(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  std::vector<std::string> names_;
};

/// Per-column z-scoring fit on one matrix and applied to others.
/// Columns with zero spread are centred only.
class Standardizer {
 public:
  static Standardizer fit(const Matrix& x);
  Matrix transform(const Matrix& x) const;
  const std::vector<double>& means() const noexcept { return mean_; }
  const std::vector<double>& scales() const noexcept { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace aeropipe::ml
