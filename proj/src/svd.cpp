#include "ctxproj/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctxproj/kernels.hpp"

namespace ctxproj {
namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOrthogonalityTol = 1e-14;

}  // namespace

SvdResult jacobi_svd(const Matrix& a) {
  if (a.rows() < a.cols()) {
    SvdResult t = jacobi_svd(transpose(a));
    return SvdResult{std::move(t.v), std::move(t.singular_values), std::move(t.u)};
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const auto& ops = kernels::active();

  // Work on A^T so each column of A is a contiguous row.
  Matrix cols = transpose(a);          // n rows of length m
  Matrix vt = Matrix::identity(n);     // row j accumulates V's column j

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* cp = cols.row_data(p);
        double* cq = cols.row_data(q);
        const double app = ops.sum_squares(cp, m);
        const double aqq = ops.sum_squares(cq, m);
        const double apq = ops.dot(cp, cq, m);
        if (app == 0.0 || aqq == 0.0) continue;
        if (std::abs(apq) <= kOrthogonalityTol * std::sqrt(app * aqq)) continue;

        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double xp = cp[i];
          const double xq = cq[i];
          cp[i] = c * xp - s * xq;
          cq[i] = s * xp + c * xq;
        }
        double* vp = vt.row_data(p);
        double* vq = vt.row_data(q);
        for (std::size_t i = 0; i < n; ++i) {
          const double xp = vp[i];
          const double xq = vq[i];
          vp[i] = c * xp - s * xq;
          vq[i] = s * xp + c * xq;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    sigma[j] = std::sqrt(ops.sum_squares(cols.row_data(j), m));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SvdResult result;
  result.u = Matrix(m, n);
  result.v = Matrix(n, n);
  result.singular_values.resize(n);
  for (std::size_t out = 0; out < n; ++out) {
    const std::size_t j = order[out];
    const double s = sigma[j];
    result.singular_values[out] = s;
    if (s == 0.0) continue;  // leave a zero column; it carries no weight

    const double* col = cols.row_data(j);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (std::abs(col[i]) > std::abs(col[peak])) peak = i;
    }
    const double flip = col[peak] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < m; ++i) result.u(i, out) = flip * col[i] / s;
    const double* vrow = vt.row_data(j);
    for (std::size_t i = 0; i < n; ++i) result.v(i, out) = flip * vrow[i];
  }
  return result;
}

}  // namespace ctxproj
