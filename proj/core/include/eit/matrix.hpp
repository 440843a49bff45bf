#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace eit {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Appends a row; the first row appended to an empty 0x0 matrix fixes the width.
  void push_row(std::span<const double> values);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double squared_euclidean(std::span<const double> a, std::span<const double> b) noexcept;
double euclidean(std::span<const double> a, std::span<const double> b) noexcept;
/// 1 - cos(a, b); a zero vector is treated as orthogonal to everything.
double cosine_distance(std::span<const double> a, std::span<const double> b) noexcept;
double l2_norm(std::span<const double> v) noexcept;

}  // namespace eit
