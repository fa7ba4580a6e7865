#include "ctxproj/rng.hpp"

#include <cmath>
#include <numbers>

namespace ctxproj {

double GaussianSource::uniform_open() {
  // 53-bit mantissa draw in (0, 1]; never 0 so log() below is safe.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Matrix GaussianSource::matrix(std::size_t rows, std::size_t cols, double scale) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = scale * next();
  return m;
}

}  // namespace ctxproj
