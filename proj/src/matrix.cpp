#include "ctxproj/matrix.hpp"

#include <cmath>
#include <string>

#include "ctxproj/errors.hpp"
#include "ctxproj/kernels.hpp"

namespace ctxproj {
namespace {

std::string shape_of(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatchError("matmul: " + shape_of(a) + " times " + shape_of(b));
  }
  const auto& ops = kernels::active();
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.row_data(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) ops.axpy(out, aik, b.row_data(k), b.cols());
    }
  }
  return c;
}

Matrix matmul_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw DimensionMismatchError("matmul_transposed: " + shape_of(a) + " times " +
                                 shape_of(b) + "^T");
  }
  const auto& ops = kernels::active();
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      c(i, j) = ops.dot(a.row_data(i), b.row_data(j), a.cols());
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatchError("add: " + shape_of(a) + " vs " + shape_of(b));
  }
  Matrix c = a;
  kernels::active().axpy(c.data(), 1.0, b.data(), b.size());
  return c;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatchError("subtract: " + shape_of(a) + " vs " + shape_of(b));
  }
  Matrix c = a;
  kernels::active().axpy(c.data(), -1.0, b.data(), b.size());
  return c;
}

Matrix scaled(const Matrix& a, double factor) {
  Matrix c = a;
  kernels::active().scale(c.data(), factor, c.size());
  return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatchError("matvec: " + shape_of(a) + " times vector of length " +
                                 std::to_string(x.size()));
  }
  const auto& ops = kernels::active();
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    y[i] = ops.dot(a.row_data(i), x.data(), x.size());
  }
  return y;
}

double frobenius_norm(const Matrix& a) {
  return std::sqrt(kernels::active().sum_squares(a.data(), a.size()));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionMismatchError("max_abs_diff: " + shape_of(a) + " vs " + shape_of(b));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a.data()[i])) return false;
  }
  return true;
}

}  // namespace ctxproj
