#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ctxproj {

// Dense row-major matrix of doubles. Rows are contiguous, which is what the
// kernel lanes vectorize over.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* row_data(std::size_t r) { return data_.data() + r * cols_; }
  const double* row_data(std::size_t r) const { return data_.data() + r * cols_; }
  std::span<double> row(std::size_t r) { return {row_data(r), cols_}; }
  std::span<const double> row(std::size_t r) const { return {row_data(r), cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// a (r x k) times b (k x c). Accumulates row-wise with axpy, so the result is
// bit-identical across kernel lanes.
Matrix matmul(const Matrix& a, const Matrix& b);

// a (r x k) times b^T where b is (c x k); inner products of contiguous rows.
Matrix matmul_transposed(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scaled(const Matrix& a, double factor);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& a);

}  // namespace ctxproj
