#pragma once

#include <cstddef>
#include <vector>

#include "ctxproj/matrix.hpp"

namespace ctxproj {

// a == u * diag(singular_values) * v^T with singular values sorted
// descending. Sign convention: the largest-magnitude entry of each left
// singular vector is positive (first such entry on ties), which makes the
// decomposition deterministic.
struct SvdResult {
  Matrix u;  // m x min(m,n)... columns span the left singular subspace
  std::vector<double> singular_values;
  Matrix v;  // n x min(m,n)
};

// One-sided Jacobi: rotates column pairs until mutually orthogonal. Exact
// enough for the dense, desk-scale matrices this library works with, and
// fully deterministic (fixed cyclic sweep order, no pivot randomness).
SvdResult jacobi_svd(const Matrix& a);

}  // namespace ctxproj
