#include "ctxproj/directional.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "ctxproj/errors.hpp"
#include "ctxproj/kernels.hpp"
#include "ctxproj/rng.hpp"

namespace ctxproj {
namespace {

Matrix gather_rows(const Matrix& table, const std::vector<std::size_t>& ids) {
  Matrix out(ids.size(), table.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    std::memcpy(out.row_data(r), table.row_data(ids[r]), table.cols() * sizeof(double));
  }
  return out;
}

void validate_params(const AttentionParams& params) {
  if (params.key_dim < 1 || params.value_dim < 1) {
    throw std::invalid_argument("key and value dimensions must be >= 1");
  }
  if (params.w_query.rows() != params.width || params.w_key.rows() != params.width ||
      params.w_value.rows() != params.width ||
      params.w_query.cols() != params.key_dim || params.w_key.cols() != params.key_dim ||
      params.w_value.cols() != params.value_dim) {
    throw DimensionMismatchError("attention parameter shapes are inconsistent");
  }
  if (!all_finite(params.w_query) || !all_finite(params.w_key) ||
      !all_finite(params.w_value)) {
    throw NonFiniteInputError("attention parameters must be finite");
  }
}

struct Gradients {
  Matrix w_query;
  Matrix w_key;
};

// Per target, with A = rows of W_Q picked by the selector, B likewise for
// W_K and D = A B^T - T:
//   dL/dW_Q scatter-adds rows of 2 D B, dL/dW_K rows of 2 D^T A.
double loss_and_gradients(const Matrix& w_query, const Matrix& w_key,
                          const std::vector<FitTarget>& targets, Gradients* grads) {
  const auto& ops = kernels::active();
  if (grads != nullptr) {
    grads->w_query = Matrix(w_query.rows(), w_query.cols());
    grads->w_key = Matrix(w_key.rows(), w_key.cols());
  }
  double loss = 0.0;
  for (const auto& target : targets) {
    const Matrix a = gather_rows(w_query, target.selector.token_ids);
    const Matrix b = gather_rows(w_key, target.selector.token_ids);
    const Matrix diff = subtract(matmul_transposed(a, b), target.target);
    loss += ops.sum_squares(diff.data(), diff.size());
    if (grads == nullptr) continue;

    const Matrix ga = scaled(matmul(diff, b), 2.0);
    const Matrix gb = scaled(matmul(transpose(diff), a), 2.0);
    for (std::size_t r = 0; r < target.selector.length; ++r) {
      const std::size_t id = target.selector.token_ids[r];
      ops.axpy(grads->w_query.row_data(id), 1.0, ga.row_data(r), ga.cols());
      ops.axpy(grads->w_key.row_data(id), 1.0, gb.row_data(r), gb.cols());
    }
  }
  return loss;
}

void validate_targets(const std::vector<FitTarget>& targets) {
  if (targets.empty()) throw EmptyTargetsError();
  const std::size_t width = targets.front().selector.vocab_size;
  for (const auto& target : targets) {
    if (target.selector.vocab_size != width) {
      throw DimensionMismatchError("targets disagree on vocabulary width");
    }
    if (target.target.rows() != target.selector.length ||
        target.target.cols() != target.selector.length) {
      throw DimensionMismatchError("target matrix does not match selector length");
    }
  }
}

}  // namespace

AttentionParams random_attention_params(std::size_t width, std::size_t key_dim,
                                        std::size_t value_dim, std::uint64_t seed) {
  if (width < 1 || key_dim < 1 || value_dim < 1) {
    throw std::invalid_argument("attention dimensions must be >= 1");
  }
  GaussianSource source(seed);
  const double key_scale = 1.0 / std::sqrt(static_cast<double>(key_dim));
  const double value_scale = 1.0 / std::sqrt(static_cast<double>(value_dim));
  AttentionParams params;
  params.width = width;
  params.key_dim = key_dim;
  params.value_dim = value_dim;
  params.w_query = source.matrix(width, key_dim, key_scale);
  params.w_key = source.matrix(width, key_dim, key_scale);
  params.w_value = source.matrix(width, value_dim, value_scale);
  return params;
}

Matrix directional_kernel(const Selector& selector, const AttentionParams& params) {
  validate_params(params);
  if (selector.vocab_size != params.width) {
    throw DimensionMismatchError("selector width does not match parameter width");
  }
  const Matrix queries = gather_rows(params.w_query, selector.token_ids);
  const Matrix keys = gather_rows(params.w_key, selector.token_ids);
  return matmul_transposed(queries, keys);
}

Matrix row_softmax(const Matrix& scores) {
  const auto& ops = kernels::active();
  Matrix weights(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const double* in = scores.row_data(r);
    double* out = weights.row_data(r);
    const double peak = ops.max_value(in, scores.cols());
    for (std::size_t c = 0; c < scores.cols(); ++c) out[c] = std::exp(in[c] - peak);
    ops.scale(out, 1.0 / ops.sum(out, scores.cols()), scores.cols());
  }
  return weights;
}

AttentionOutput attention(const Matrix& h, const AttentionParams& params) {
  validate_params(params);
  if (h.cols() != params.width) {
    throw DimensionMismatchError("representation width " + std::to_string(h.cols()) +
                                 " does not match parameter width " +
                                 std::to_string(params.width));
  }
  if (h.rows() < 1) throw std::invalid_argument("attention needs at least one row");
  if (!all_finite(h)) throw NonFiniteInputError("representations must be finite");

  const Matrix queries = matmul(h, params.w_query);
  const Matrix keys = matmul(h, params.w_key);
  AttentionOutput out;
  out.scores = matmul_transposed(queries, keys);
  kernels::active().scale(out.scores.data(),
                          1.0 / std::sqrt(static_cast<double>(params.key_dim)),
                          out.scores.size());
  out.weights = row_softmax(out.scores);
  out.output = matmul(out.weights, matmul(h, params.w_value));
  return out;
}

double fit_loss(const AttentionParams& params, const std::vector<FitTarget>& targets) {
  validate_targets(targets);
  return loss_and_gradients(params.w_query, params.w_key, targets, nullptr);
}

FitResult fit_directional_kernel(const std::vector<FitTarget>& targets,
                                 const FitOptions& options) {
  validate_targets(targets);
  if (options.key_dim < 1) throw std::invalid_argument("key_dim must be >= 1");
  if (!(options.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  const std::size_t width = targets.front().selector.vocab_size;
  const auto& ops = kernels::active();

  GaussianSource source(options.seed);
  const double init_scale = 1.0 / std::sqrt(static_cast<double>(options.key_dim));
  Matrix w_query = source.matrix(width, options.key_dim, init_scale);
  Matrix w_key = source.matrix(width, options.key_dim, init_scale);

  FitResult result;
  Gradients grads;
  double loss = loss_and_gradients(w_query, w_key, targets, &grads);
  result.loss_trace.push_back(loss);

  auto gradient_norm_of = [&ops](const Gradients& g) {
    return std::sqrt(ops.sum_squares(g.w_query.data(), g.w_query.size()) +
                     ops.sum_squares(g.w_key.data(), g.w_key.size()));
  };
  result.gradient_norm = gradient_norm_of(grads);

  constexpr double kMinStep = 1e-20;
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    const double gradient_norm = gradient_norm_of(grads);
    result.gradient_norm = gradient_norm;
    if (gradient_norm <= options.tol) {
      result.converged = true;
      break;
    }

    // Halving line search: accept the first step that does not increase
    // the loss.
    double step = options.learning_rate;
    Matrix next_query, next_key;
    double next_loss = loss;
    bool accepted = false;
    while (step >= kMinStep) {
      next_query = w_query;
      next_key = w_key;
      ops.axpy(next_query.data(), -step, grads.w_query.data(), next_query.size());
      ops.axpy(next_key.data(), -step, grads.w_key.data(), next_key.size());
      next_loss = loss_and_gradients(next_query, next_key, targets, nullptr);
      if (next_loss <= loss) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled: no descent direction at machine scale

    w_query = std::move(next_query);
    w_key = std::move(next_key);
    loss = loss_and_gradients(w_query, w_key, targets, &grads);
    result.loss_trace.push_back(loss);
    result.iterations = iter + 1;
  }

  result.final_loss = loss;
  result.params.width = width;
  result.params.key_dim = options.key_dim;
  result.params.value_dim = options.key_dim;
  result.params.w_query = std::move(w_query);
  result.params.w_key = std::move(w_key);
  result.params.w_value = source.matrix(width, options.key_dim, init_scale);
  return result;
}

double gradient_check(const AttentionParams& params,
                      const std::vector<FitTarget>& targets, double epsilon) {
  validate_targets(targets);
  if (!(epsilon > 0.0) || epsilon > 1e-2) {
    throw std::invalid_argument("epsilon must lie in (0, 1e-2]");
  }

  Gradients analytic;
  loss_and_gradients(params.w_query, params.w_key, targets, &analytic);

  double worst = 0.0;
  auto probe = [&](const Matrix& base, const Matrix& analytic_grad, bool is_query) {
    Matrix perturbed = base;
    for (std::size_t i = 0; i < perturbed.size(); ++i) {
      const double original = perturbed.data()[i];
      perturbed.data()[i] = original + epsilon;
      const double plus = is_query
                              ? loss_and_gradients(perturbed, params.w_key, targets, nullptr)
                              : loss_and_gradients(params.w_query, perturbed, targets, nullptr);
      perturbed.data()[i] = original - epsilon;
      const double minus = is_query
                               ? loss_and_gradients(perturbed, params.w_key, targets, nullptr)
                               : loss_and_gradients(params.w_query, perturbed, targets, nullptr);
      perturbed.data()[i] = original;

      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double exact = analytic_grad.data()[i];
      const double relative =
          std::abs(exact - numeric) / (std::abs(exact) + std::abs(numeric) + 1e-12);
      worst = std::max(worst, relative);
    }
  };
  probe(params.w_query, analytic.w_query, true);
  probe(params.w_key, analytic.w_key, false);
  return worst;
}

}  // namespace ctxproj
