#pragma once

#include <cstddef>
#include <string_view>

namespace ctxproj::kernels {

// Arithmetic inner loops behind the dense-matrix layer. Every op has a
// scalar reference implementation; on x86-64 hosts with AVX2+FMA a vector
// variant is selected at runtime. axpy and scale are elementwise and use
// fused multiply-add in both lanes, so anything built purely on them
// (matrix products in particular) is bit-identical across lanes. The
// reductions (dot, sum, sum_squares) accumulate in a different order in
// the vector lane and may differ by rounding.
struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // x[i] *= a
  void (*scale)(double* x, double a, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // requires n >= 1 and no NaNs
  double (*max_value)(const double* x, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
};

enum class Lane { scalar, avx2 };

std::string_view lane_name(Lane lane);
bool lane_available(Lane lane);

// Throws std::invalid_argument when the lane is not available on this host.
const Ops& ops_for(Lane lane);

// The active lane defaults to the best available one. The environment
// variable CTXPROJ_LANE ("scalar" or "avx2") overrides the default;
// force_lane overrides both.
Lane active_lane();
const Ops& active();
void force_lane(Lane lane);

}  // namespace ctxproj::kernels
