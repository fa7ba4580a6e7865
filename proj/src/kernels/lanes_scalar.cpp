#include <cmath>
#include <cstddef>

#include "lane_impl.hpp"

namespace ctxproj::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(x[i], y[i], acc);
  return acc;
}

void axpy_scalar(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale_scalar(double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double max_value_scalar(const double* x, std::size_t n) {
  double m = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] > m) m = x[i];
  }
  return m;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = std::fma(x[i], x[i], acc);
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{dot_scalar,       axpy_scalar, scale_scalar,
                       sum_scalar,       max_value_scalar,
                       sum_squares_scalar};
  return ops;
}

}  // namespace ctxproj::kernels
