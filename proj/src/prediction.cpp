#include "ctxproj/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctxproj/errors.hpp"
#include "ctxproj/kernels.hpp"

namespace ctxproj {

EvidenceMatrix evidence(const ContextKernel& kernel, const Matrix& selected_rows) {
  if (kernel.scores.cols() != selected_rows.rows()) {
    throw DimensionMismatchError("kernel length " + std::to_string(kernel.scores.cols()) +
                                 " does not match selected rows " +
                                 std::to_string(selected_rows.rows()));
  }
  Matrix e = matmul(kernel.scores, selected_rows);
  return EvidenceMatrix{kernel.length, selected_rows.cols(), std::move(e)};
}

std::vector<double> aggregate(const EvidenceMatrix& e) {
  if (e.length == 0) throw std::invalid_argument("evidence matrix has no rows");
  const auto& ops = kernels::active();
  std::vector<double> pooled(e.vocab_size, 0.0);
  for (std::size_t r = 0; r < e.length; ++r) {
    ops.axpy(pooled.data(), 1.0, e.entries.row_data(r), e.vocab_size);
  }
  ops.scale(pooled.data(), 1.0 / static_cast<double>(e.length), e.vocab_size);
  return pooled;
}

TokenDistribution predict(const std::vector<double>& pooled, double temperature) {
  if (pooled.empty()) throw std::invalid_argument("pooled scores must be non-empty");
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  for (double v : pooled) {
    if (!std::isfinite(v)) throw NonFiniteInputError("pooled scores must be finite");
  }
  const auto& ops = kernels::active();

  TokenDistribution dist;
  dist.vocab_size = pooled.size();
  dist.logits = pooled;
  if (temperature != 1.0) {
    ops.scale(dist.logits.data(), 1.0 / temperature, dist.logits.size());
  }

  const double peak = ops.max_value(dist.logits.data(), dist.logits.size());
  dist.probabilities.resize(dist.vocab_size);
  for (std::size_t i = 0; i < dist.vocab_size; ++i) {
    dist.probabilities[i] = std::exp(dist.logits[i] - peak);
  }
  const double total = ops.sum(dist.probabilities.data(), dist.probabilities.size());
  ops.scale(dist.probabilities.data(), 1.0 / total, dist.probabilities.size());

  dist.argmax = static_cast<std::size_t>(
      std::max_element(dist.probabilities.begin(), dist.probabilities.end()) -
      dist.probabilities.begin());
  return dist;
}

PredictionTrace run_prediction(const CoocMatrix& s, const Vocabulary& vocab,
                               const std::vector<std::string>& sequence,
                               const PredictionOptions& options) {
  if (s.n != vocab.size()) {
    throw DimensionMismatchError("matrix size does not match vocabulary size");
  }
  PredictionTrace trace;
  trace.selector = selector_from_tokens(vocab, sequence);
  trace.selected_rows = select_rows(trace.selector, s);
  trace.kernel = project(trace.selector, s);
  trace.attention = row_normalize(trace.kernel);
  const ContextKernel& weighting =
      options.use_normalized_kernel ? trace.attention : trace.kernel;
  trace.evidence = evidence(weighting, trace.selected_rows);
  trace.pooled = aggregate(trace.evidence);
  trace.distribution = predict(trace.pooled, options.temperature);

  if (sequence.size() == 1) {
    trace.warnings.push_back(
        "single-token sequence: the context kernel is all zero, so the "
        "prediction is uninformative");
  }
  if (!trace.attention.degenerate_rows.empty()) {
    std::string rows;
    for (std::size_t r : trace.attention.degenerate_rows) {
      if (!rows.empty()) rows += ", ";
      rows += std::to_string(r);
    }
    trace.warnings.push_back("zero-mass kernel rows set to uniform: " + rows);
  }
  return trace;
}

TokenDistribution next_token_distribution(const CoocMatrix& s, const Vocabulary& vocab,
                                          const std::vector<std::string>& sequence) {
  return run_prediction(s, vocab, sequence).distribution;
}

}  // namespace ctxproj
