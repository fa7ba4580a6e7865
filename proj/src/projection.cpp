#include "ctxproj/projection.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include "ctxproj/errors.hpp"
#include "ctxproj/kernels.hpp"

namespace ctxproj {
namespace {

void require_matching_width(const Selector& selector, const CoocMatrix& s) {
  if (selector.vocab_size != s.n) {
    throw DimensionMismatchError("selector width " + std::to_string(selector.vocab_size) +
                                 " does not match matrix size " + std::to_string(s.n));
  }
}

}  // namespace

Selector selector_from_sequence(const std::vector<std::size_t>& token_ids,
                                std::size_t vocab_size) {
  if (token_ids.empty()) throw std::invalid_argument("sequence must be non-empty");
  for (std::size_t id : token_ids) {
    if (id >= vocab_size) throw IndexOutOfRangeError(id, vocab_size);
  }
  const std::size_t length = token_ids.size();
  Matrix rows(length, vocab_size);
  for (std::size_t r = 0; r < length; ++r) rows(r, token_ids[r]) = 1.0;
  return Selector{length, vocab_size, token_ids, std::move(rows)};
}

Selector selector_from_tokens(const Vocabulary& vocab,
                              const std::vector<std::string>& tokens) {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) ids.push_back(vocab.id_of(token));
  return selector_from_sequence(ids, vocab.size());
}

Matrix select_rows(const Selector& selector, const CoocMatrix& s) {
  require_matching_width(selector, s);
  Matrix out(selector.length, s.n);
  for (std::size_t r = 0; r < selector.length; ++r) {
    std::memcpy(out.row_data(r), s.entries.row_data(selector.token_ids[r]),
                s.n * sizeof(double));
  }
  return out;
}

ContextKernel project(const Selector& selector, const CoocMatrix& s) {
  require_matching_width(selector, s);
  Matrix scores(selector.length, selector.length);
  for (std::size_t r = 0; r < selector.length; ++r) {
    for (std::size_t c = 0; c < selector.length; ++c) {
      scores(r, c) = s.entries(selector.token_ids[r], selector.token_ids[c]);
    }
  }
  return ContextKernel{selector.length, std::move(scores), false, {}};
}

ContextKernel row_normalize(const ContextKernel& kernel) {
  const auto& ops = kernels::active();
  const std::size_t length = kernel.length;
  for (std::size_t i = 0; i < kernel.scores.size(); ++i) {
    if (kernel.scores.data()[i] < 0.0) {
      throw NegativeScoreError("row_normalize requires non-negative scores");
    }
  }
  ContextKernel out{length, kernel.scores, true, {}};
  for (std::size_t r = 0; r < length; ++r) {
    const double row_sum = ops.sum(out.scores.row_data(r), length);
    if (row_sum > 0.0) {
      ops.scale(out.scores.row_data(r), 1.0 / row_sum, length);
    } else {
      const double uniform = 1.0 / static_cast<double>(length);
      for (std::size_t c = 0; c < length; ++c) out.scores(r, c) = uniform;
      out.degenerate_rows.push_back(r);
    }
  }
  return out;
}

double projection_identity_residual(const CoocMatrix& s, const Selector& selector,
                                    std::span<const double> u,
                                    std::span<const double> v) {
  require_matching_width(selector, s);
  if (u.size() != selector.length || v.size() != selector.length) {
    throw DimensionMismatchError("u and v must have the sequence length");
  }
  const auto& ops = kernels::active();

  const ContextKernel kernel = project(selector, s);
  const std::vector<double> mv = matvec(kernel.scores, v);
  const double lhs = ops.dot(u.data(), mv.data(), u.size());

  // Q^T u scatters sequence weights onto vocabulary coordinates.
  std::vector<double> qu(s.n, 0.0);
  std::vector<double> qv(s.n, 0.0);
  for (std::size_t r = 0; r < selector.length; ++r) {
    qu[selector.token_ids[r]] += u[r];
    qv[selector.token_ids[r]] += v[r];
  }
  const std::vector<double> sv = matvec(s.entries, qv);
  const double rhs = ops.dot(qu.data(), sv.data(), qu.size());

  return std::abs(lhs - rhs);
}

}  // namespace ctxproj
