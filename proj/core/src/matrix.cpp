#include "eit/matrix.hpp"

#include <cmath>

#include "eit/error.hpp"

namespace eit {

void Matrix::push_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) cols_ = values.size();
  if (values.size() != cols_) throw InvalidArgument("Matrix::push_row: width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_euclidean(a, b));
}

double l2_norm(std::span<const double> v) noexcept {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double cosine_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace eit
