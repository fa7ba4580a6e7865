// AVX2+FMA variants of the inner loops. Compiled with -mavx2 -mfma and only
// reached through the dispatch table after a runtime cpuid check, so the rest
// of the library can be built for a generic x86-64 baseline.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "lane_impl.hpp"

namespace ctxproj::kernels {
namespace {

double horizontal_sum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    i += 4;
  }
  double acc = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc = std::fma(x[i], y[i], acc);
  return acc;
}

void axpy_avx2(double* y, double a, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scale_avx2(double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double max_value_avx2(const double* x, std::size_t n) {
  double m = x[0];
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) {
      vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    }
    __m128d lo = _mm256_castpd256_pd128(vm);
    __m128d hi = _mm256_extractf128_pd(vm, 1);
    __m128d pair = _mm_max_pd(lo, hi);
    m = _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
  }
  for (; i < n; ++i) {
    if (x[i] > m) m = x[i];
  }
  return m;
}

double sum_squares_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(vx, vx, acc);
  }
  double total = horizontal_sum(acc);
  for (; i < n; ++i) total = std::fma(x[i], x[i], total);
  return total;
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops ops{dot_avx2,       axpy_avx2, scale_avx2,
                       sum_avx2,       max_value_avx2,
                       sum_squares_avx2};
  return ops;
}

}  // namespace ctxproj::kernels
