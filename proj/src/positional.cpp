#include "ctxproj/positional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ctxproj/errors.hpp"
#include "ctxproj/rng.hpp"

namespace ctxproj {
namespace {

Matrix sinusoidal_rows(std::size_t length, std::size_t vocab_size, double amplitude) {
  Matrix rows(length, vocab_size);
  for (std::size_t r = 0; r < length; ++r) {
    for (std::size_t c = 0; c < vocab_size; ++c) {
      const double exponent =
          2.0 * static_cast<double>(c / 2) / static_cast<double>(vocab_size);
      const double angle = static_cast<double>(r) / std::pow(10000.0, exponent);
      rows(r, c) = amplitude * (c % 2 == 0 ? std::sin(angle) : std::cos(angle));
    }
  }
  return rows;
}

}  // namespace

PositionalMatrix positional_matrix(std::size_t length, std::size_t vocab_size,
                                   PositionalScheme scheme, double amplitude,
                                   std::uint64_t seed) {
  if (length < 1 || vocab_size < 1) {
    throw std::invalid_argument("positional matrix needs length >= 1 and width >= 1");
  }
  if (!(amplitude >= 0.0)) throw std::invalid_argument("amplitude must be >= 0");

  Matrix rows;
  if (amplitude == 0.0) {
    rows = Matrix(length, vocab_size);
  } else if (scheme == PositionalScheme::sinusoidal) {
    rows = sinusoidal_rows(length, vocab_size, amplitude);
  } else {
    rows = GaussianSource(seed).matrix(length, vocab_size, amplitude);
  }
  return PositionalMatrix{length, vocab_size, std::move(rows), scheme, amplitude};
}

PositionalDecomposition project_positional(const Selector& selector,
                                           const PositionalMatrix& positions,
                                           const CoocMatrix& s) {
  if (selector.vocab_size != s.n || positions.vocab_size != s.n ||
      positions.length != selector.length) {
    throw DimensionMismatchError("selector, positions and matrix disagree on shape");
  }

  PositionalDecomposition out;
  out.content_content = project(selector, s).scores;

  const Matrix qs = select_rows(selector, s);
  out.content_position = matmul_transposed(qs, positions.rows);

  // P S Q^T: gather the selected columns of P S.
  const Matrix ps = matmul(positions.rows, s.entries);
  out.position_content = Matrix(selector.length, selector.length);
  for (std::size_t r = 0; r < selector.length; ++r) {
    for (std::size_t c = 0; c < selector.length; ++c) {
      out.position_content(r, c) = ps(r, selector.token_ids[c]);
    }
  }
  out.position_position = matmul_transposed(ps, positions.rows);

  const Matrix augmented = add(selector.rows, positions.rows);
  out.total = matmul_transposed(matmul(augmented, s.entries), augmented);
  return out;
}

OrderSensitivityReport order_sensitivity_report(const CoocMatrix& s,
                                                const Vocabulary& vocab,
                                                const std::vector<std::string>& seq_a,
                                                const std::vector<std::string>& seq_b,
                                                const PositionalParams& params) {
  const Selector sel_a = selector_from_tokens(vocab, seq_a);
  const Selector sel_b = selector_from_tokens(vocab, seq_b);
  if (sel_a.length != sel_b.length) {
    throw NotAPermutationError("sequences have different lengths");
  }
  const std::size_t length = sel_a.length;

  // alignment[r] = position in seq_a holding the token seq_b has at r.
  std::vector<std::size_t> alignment(length);
  std::map<std::size_t, std::vector<std::size_t>> pool;
  for (std::size_t p = 0; p < length; ++p) pool[sel_a.token_ids[p]].push_back(p);
  for (std::size_t r = 0; r < length; ++r) {
    auto it = pool.find(sel_b.token_ids[r]);
    if (it == pool.end() || it->second.empty()) {
      throw NotAPermutationError("second sequence is not a permutation of the first");
    }
    alignment[r] = it->second.front();
    it->second.erase(it->second.begin());
  }

  auto align = [&](const Matrix& m) {
    Matrix aligned(length, length);
    for (std::size_t r = 0; r < length; ++r) {
      for (std::size_t c = 0; c < length; ++c) {
        aligned(r, c) = m(alignment[r], alignment[c]);
      }
    }
    return aligned;
  };

  OrderSensitivityReport report;
  report.alignment = alignment;

  const Matrix kernel_a = project(sel_a, s).scores;
  const Matrix kernel_b = project(sel_b, s).scores;
  report.distance_without_positions = frobenius_norm(subtract(align(kernel_a), kernel_b));

  const PositionalMatrix positions =
      positional_matrix(length, s.n, params.scheme, params.amplitude, params.seed);
  const Matrix total_a = project_positional(sel_a, positions, s).total;
  const Matrix total_b = project_positional(sel_b, positions, s).total;
  report.aligned_total_first = align(total_a);
  report.total_second = total_b;
  report.distance_with_positions =
      frobenius_norm(subtract(report.aligned_total_first, total_b));
  return report;
}

}  // namespace ctxproj
