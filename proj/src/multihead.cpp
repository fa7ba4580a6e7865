#include "ctxproj/multihead.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ctxproj/errors.hpp"
#include "ctxproj/kernels.hpp"
#include "ctxproj/svd.hpp"

namespace ctxproj {

HeadFactorization factor_heads(const CoocMatrix& s, std::size_t head_count,
                               std::size_t rank_per_head) {
  if (head_count < 1 || rank_per_head < 1) {
    throw std::invalid_argument("head count and rank must be >= 1");
  }
  if (head_count * rank_per_head > s.n) {
    throw RankExceededError("h*d_k = " + std::to_string(head_count * rank_per_head) +
                            " exceeds matrix size " + std::to_string(s.n));
  }

  const SvdResult svd = jacobi_svd(s.entries);

  HeadFactorization out;
  out.singular_values = svd.singular_values;
  out.heads.head_count = head_count;
  out.heads.model_dim = s.n;
  out.combined_kernel = Matrix(s.n, s.n);

  for (std::size_t head = 0; head < head_count; ++head) {
    AttentionParams params;
    params.width = s.n;
    params.key_dim = rank_per_head;
    params.value_dim = rank_per_head;
    params.w_query = Matrix(s.n, rank_per_head);
    params.w_key = Matrix(s.n, rank_per_head);
    params.w_value = Matrix(s.n, rank_per_head);

    for (std::size_t slot = 0; slot < rank_per_head; ++slot) {
      // Triplet ranks are dealt round-robin: head h takes ranks h, h+H, ...
      const std::size_t rank = slot * head_count + head;
      const double sigma = svd.singular_values[rank];
      const double root = std::sqrt(sigma);
      for (std::size_t i = 0; i < s.n; ++i) {
        params.w_query(i, slot) = root * svd.u(i, rank);
        params.w_key(i, slot) = root * svd.v(i, rank);
        params.w_value(i, slot) = svd.u(i, rank);
      }
    }
    Matrix kernel = matmul_transposed(params.w_query, params.w_key);
    out.combined_kernel = add(out.combined_kernel, kernel);
    out.head_kernels.push_back(std::move(kernel));
    out.heads.heads.push_back(std::move(params));
  }

  const std::size_t concat_dim = head_count * rank_per_head;
  out.heads.w_output = Matrix(concat_dim, s.n);
  for (std::size_t head = 0; head < head_count; ++head) {
    for (std::size_t slot = 0; slot < rank_per_head && slot < s.n; ++slot) {
      out.heads.w_output(head * rank_per_head + slot, slot) = 1.0;
    }
  }

  out.reconstruction_error = frobenius_norm(subtract(s.entries, out.combined_kernel));
  return out;
}

Matrix multi_head_attention(const Matrix& h, const HeadSet& heads) {
  if (heads.heads.empty()) throw std::invalid_argument("head set is empty");

  std::size_t concat_dim = 0;
  for (const auto& params : heads.heads) concat_dim += params.value_dim;
  if (heads.w_output.rows() != concat_dim || heads.w_output.cols() != heads.model_dim) {
    throw DimensionMismatchError("output projection shape does not match head set");
  }

  Matrix concatenated(h.rows(), concat_dim);
  std::size_t offset = 0;
  for (const auto& params : heads.heads) {
    const AttentionOutput head_out = attention(h, params);
    for (std::size_t r = 0; r < h.rows(); ++r) {
      for (std::size_t c = 0; c < params.value_dim; ++c) {
        concatenated(r, offset + c) = head_out.output(r, c);
      }
    }
    offset += params.value_dim;
  }
  return matmul(concatenated, heads.w_output);
}

AttentionOutput cross_attention(const Matrix& h_target, const Matrix& h_source,
                                const AttentionParams& params) {
  if (h_target.cols() != params.width || h_source.cols() != params.width) {
    throw DimensionMismatchError("representation widths do not match parameters");
  }
  if (h_target.rows() < 1 || h_source.rows() < 1) {
    throw std::invalid_argument("cross attention needs non-empty sequences");
  }
  if (!all_finite(h_target) || !all_finite(h_source)) {
    throw NonFiniteInputError("representations must be finite");
  }

  const Matrix queries = matmul(h_target, params.w_query);
  const Matrix keys = matmul(h_source, params.w_key);
  AttentionOutput out;
  out.scores = matmul_transposed(queries, keys);
  kernels::active().scale(out.scores.data(),
                          1.0 / std::sqrt(static_cast<double>(params.key_dim)),
                          out.scores.size());
  out.weights = row_softmax(out.scores);
  out.output = matmul(out.weights, matmul(h_source, params.w_value));
  return out;
}

}  // namespace ctxproj
