#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ctxproj/corpus.hpp"
#include "ctxproj/matrix.hpp"

namespace ctxproj {

// One-hot selector: row r picks vocabulary index token_ids[r]. Repeated
// tokens are allowed (identical rows).
struct Selector {
  std::size_t length = 0;      // R
  std::size_t vocab_size = 0;  // n
  std::vector<std::size_t> token_ids;
  Matrix rows;  // R x n
};

// R x R compatibility scores among sequence positions. When normalized,
// every row is a probability distribution except the ones listed in
// degenerate_rows, which had zero mass and were set uniform.
struct ContextKernel {
  std::size_t length = 0;
  Matrix scores;
  bool normalized = false;
  std::vector<std::size_t> degenerate_rows;
};

Selector selector_from_sequence(const std::vector<std::size_t>& token_ids,
                                std::size_t vocab_size);
Selector selector_from_tokens(const Vocabulary& vocab,
                              const std::vector<std::string>& tokens);

// Q S: row r is row token_ids[r] of S.
Matrix select_rows(const Selector& selector, const CoocMatrix& s);

// Q S Q^T: scores[r][s] = S[token_ids[r]][token_ids[s]].
ContextKernel project(const Selector& selector, const CoocMatrix& s);

// Divides each row by its sum; zero-mass rows become uniform 1/R and are
// reported in degenerate_rows.
ContextKernel row_normalize(const ContextKernel& kernel);

// |u^T M v - (Q^T u)^T S (Q^T v)| with M = project(selector, s); both sides
// evaluated independently.
double projection_identity_residual(const CoocMatrix& s, const Selector& selector,
                                    std::span<const double> u,
                                    std::span<const double> v);

}  // namespace ctxproj
