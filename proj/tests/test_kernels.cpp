#include <cmath>
#include <random>
#include <vector>

#include "ctxproj/kernels.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using ctxproj::kernels::Lane;
using ctxproj::kernels::lane_available;
using ctxproj::kernels::Ops;
using ctxproj::kernels::ops_for;

namespace {

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, bool integers) {
  std::vector<double> v(n);
  if (integers) {
    std::uniform_int_distribution<int> dist(-9, 9);
    for (auto& x : v) x = static_cast<double>(dist(rng));
  } else {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (auto& x : v) x = dist(rng);
  }
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward loops") {
  const Ops& ops = ops_for(Lane::scalar);
  std::mt19937_64 rng(11);
  for (std::size_t n : {1u, 2u, 3u, 7u, 16u, 33u}) {
    auto x = random_values(rng, n, false);
    auto y = random_values(rng, n, false);

    double dot = 0.0, sum = 0.0, sum_sq = 0.0, max = x[0];
    for (std::size_t i = 0; i < n; ++i) {
      dot += x[i] * y[i];
      sum += x[i];
      sum_sq += x[i] * x[i];
      max = std::max(max, x[i]);
    }
    CHECK(ops.dot(x.data(), y.data(), n) == doctest::Approx(dot).epsilon(1e-13));
    CHECK(ops.sum(x.data(), n) == doctest::Approx(sum).epsilon(1e-13));
    CHECK(ops.sum_squares(x.data(), n) == doctest::Approx(sum_sq).epsilon(1e-13));
    CHECK(ops.max_value(x.data(), n) == max);

    auto y2 = y;
    ops.axpy(y2.data(), 0.5, x.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y2[i] == doctest::Approx(y[i] + 0.5 * x[i]).epsilon(1e-14));
    }
    auto x2 = x;
    ops.scale(x2.data(), -3.0, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(x2[i] == -3.0 * x[i]);
  }
}

TEST_CASE("vector lane agrees with the scalar reference") {
  if (!lane_available(Lane::avx2)) {
    MESSAGE("avx2 lane not available on this host; skipping");
    return;
  }
  const Ops& scalar = ops_for(Lane::scalar);
  const Ops& vec = ops_for(Lane::avx2);
  std::mt19937_64 rng(29);

  // Odd lengths exercise the tail loops.
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 64u, 301u}) {
    CAPTURE(n);

    // Integer-valued data: partial sums stay exact, so every reduction must
    // agree bit for bit regardless of accumulation order.
    auto xi = random_values(rng, n, true);
    auto yi = random_values(rng, n, true);
    CHECK(vec.dot(xi.data(), yi.data(), n) == scalar.dot(xi.data(), yi.data(), n));
    CHECK(vec.sum(xi.data(), n) == scalar.sum(xi.data(), n));
    CHECK(vec.sum_squares(xi.data(), n) == scalar.sum_squares(xi.data(), n));
    CHECK(vec.max_value(xi.data(), n) == scalar.max_value(xi.data(), n));

    // Real-valued data: reductions may differ by accumulation order only.
    auto x = random_values(rng, n, false);
    auto y = random_values(rng, n, false);
    CHECK(vec.dot(x.data(), y.data(), n) ==
          doctest::Approx(scalar.dot(x.data(), y.data(), n)).epsilon(1e-13));
    CHECK(vec.sum(x.data(), n) == doctest::Approx(scalar.sum(x.data(), n)).epsilon(1e-13));
    CHECK(vec.sum_squares(x.data(), n) ==
          doctest::Approx(scalar.sum_squares(x.data(), n)).epsilon(1e-13));
    CHECK(vec.max_value(x.data(), n) == scalar.max_value(x.data(), n));

    // Elementwise ops use fma in both lanes: bit-identical.
    auto ys = y, yv = y;
    scalar.axpy(ys.data(), 1.7, x.data(), n);
    vec.axpy(yv.data(), 1.7, x.data(), n);
    CHECK(ys == yv);
    auto xs = x, xv = x;
    scalar.scale(xs.data(), 0.3, n);
    vec.scale(xv.data(), 0.3, n);
    CHECK(xs == xv);
  }
}

TEST_CASE("lane forcing round-trips") {
  const Lane original = ctxproj::kernels::active_lane();
  ctxproj::kernels::force_lane(Lane::scalar);
  CHECK(ctxproj::kernels::active_lane() == Lane::scalar);
  ctxproj::kernels::force_lane(original);
  CHECK(ctxproj::kernels::active_lane() == original);
}
