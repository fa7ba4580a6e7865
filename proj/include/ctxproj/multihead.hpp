#pragma once

#include <cstddef>
#include <vector>

#include "ctxproj/corpus.hpp"
#include "ctxproj/directional.hpp"
#include "ctxproj/matrix.hpp"

namespace ctxproj {

// A bank of attention heads plus the output projection that recombines
// their concatenated outputs.
struct HeadSet {
  std::size_t head_count = 0;
  std::size_t model_dim = 0;  // output width after W_O
  std::vector<AttentionParams> heads;
  Matrix w_output;  // (sum of value dims) x model_dim
};

// factor_heads output: the heads plus the per-head kernels S^(i) they
// realize, with sum_i S^(i) the best rank-(h * d_k) approximation of S.
struct HeadFactorization {
  HeadSet heads;
  std::vector<Matrix> head_kernels;       // S^(i) = W_Q^(i) W_K^(i)^T
  Matrix combined_kernel;                 // sum of the head kernels
  std::vector<double> singular_values;    // all singular values of S, descending
  double reconstruction_error = 0.0;      // ||S - combined||_F
};

// Splits S into h low-rank relational components via truncated SVD.
// Singular triplets are assigned round-robin in descending order, d_k per
// head; head i gets W_Q = U_i sqrt(sigma_i) and W_K = V_i sqrt(sigma_i).
// W_V starts as the U_i block and W_O as stacked identity blocks; both are
// initializations only.
HeadFactorization factor_heads(const CoocMatrix& s, std::size_t head_count,
                               std::size_t rank_per_head);

// Concatenates per-head attention outputs in head-index order and applies
// W_O.
Matrix multi_head_attention(const Matrix& h, const HeadSet& heads);

// softmax(H_tgt W_Q (H_src W_K)^T / sqrt(d_k)) (H_src W_V); weights are
// R_tgt x R_src.
AttentionOutput cross_attention(const Matrix& h_target, const Matrix& h_source,
                                const AttentionParams& params);

}  // namespace ctxproj
