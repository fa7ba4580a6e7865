#pragma once

#include <cstdint>
#include <random>

#include "ctxproj/matrix.hpp"

namespace ctxproj {

// Seeded unit-normal source. The transform is an explicit Box-Muller over
// mt19937_64 rather than std::normal_distribution, whose output sequence is
// implementation-defined; the same seed must produce the same draws on every
// platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next();

  // rows x cols, filled row-major with scale * N(0, 1) draws.
  Matrix matrix(std::size_t rows, std::size_t cols, double scale = 1.0);

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ctxproj
