#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctxproj/matrix.hpp"
#include "ctxproj/projection.hpp"

namespace ctxproj {

// Learned query/key/value maps. W_Q W_K^T plays the structural role of the
// co-occurrence operator but need not be symmetric.
struct AttentionParams {
  std::size_t width = 0;      // n, or d_model for dense representations
  std::size_t key_dim = 0;    // d_k
  std::size_t value_dim = 0;  // d_v
  Matrix w_query;             // width x d_k
  Matrix w_key;               // width x d_k
  Matrix w_value;             // width x d_v
};

AttentionParams random_attention_params(std::size_t width, std::size_t key_dim,
                                        std::size_t value_dim, std::uint64_t seed);

struct AttentionOutput {
  Matrix scores;   // pre-softmax, already scaled by 1/sqrt(d_k)
  Matrix weights;  // row-stochastic
  Matrix output;   // weights * (H W_V)
};

// Q W_Q W_K^T Q^T for a one-hot selector.
Matrix directional_kernel(const Selector& selector, const AttentionParams& params);

// Row-wise softmax with max subtraction.
Matrix row_softmax(const Matrix& scores);

// softmax(H W_Q (H W_K)^T / sqrt(d_k)) (H W_V)
AttentionOutput attention(const Matrix& h, const AttentionParams& params);

struct FitTarget {
  Selector selector;
  Matrix target;  // R x R
};

struct FitOptions {
  std::size_t key_dim = 1;
  std::uint64_t seed = 0;
  double learning_rate = 0.1;
  std::size_t max_iters = 10000;
  double tol = 1e-10;  // on the gradient Frobenius norm
};

struct FitResult {
  AttentionParams params;
  std::vector<double> loss_trace;  // loss before the first step, then after each accepted step
  double final_loss = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // gradient norm reached tol
};

// Minimizes sum_t ||Q_t W_Q W_K^T Q_t^T - T_t||_F^2 by full-batch gradient
// descent with a halving line search; the trace is monotone nonincreasing.
// Non-convergence is not an error: the trace and final loss are returned
// regardless.
FitResult fit_directional_kernel(const std::vector<FitTarget>& targets,
                                 const FitOptions& options);

double fit_loss(const AttentionParams& params, const std::vector<FitTarget>& targets);

// Max relative error between the analytic gradients of fit_loss and central
// finite differences, over every entry of W_Q and W_K.
double gradient_check(const AttentionParams& params,
                      const std::vector<FitTarget>& targets, double epsilon);

}  // namespace ctxproj
