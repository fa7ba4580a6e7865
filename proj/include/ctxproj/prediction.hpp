#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ctxproj/corpus.hpp"
#include "ctxproj/matrix.hpp"
#include "ctxproj/projection.hpp"

namespace ctxproj {

// E = M (Q S): context-weighted associations of each position with the whole
// vocabulary.
struct EvidenceMatrix {
  std::size_t length = 0;      // R
  std::size_t vocab_size = 0;  // n
  Matrix entries;
};

struct TokenDistribution {
  std::size_t vocab_size = 0;
  std::vector<double> logits;  // pre-softmax scores
  std::vector<double> probabilities;
  std::size_t argmax = 0;
};

EvidenceMatrix evidence(const ContextKernel& kernel, const Matrix& selected_rows);

// Position mean: pooled[j] = (1/R) sum_r E[r][j].
std::vector<double> aggregate(const EvidenceMatrix& e);

// Softmax with max subtraction. temperature divides the scores before the
// softmax; the stored logits are the actual pre-softmax values.
TokenDistribution predict(const std::vector<double>& pooled, double temperature = 1.0);

struct PredictionOptions {
  bool use_normalized_kernel = false;  // worked-example arithmetic uses the raw kernel
  double temperature = 1.0;
};

// Everything the pipeline computes, for reporting.
struct PredictionTrace {
  Selector selector;
  Matrix selected_rows;       // Q S
  ContextKernel kernel;       // M
  ContextKernel attention;    // Norm(M)
  EvidenceMatrix evidence;    // E
  std::vector<double> pooled; // e_global
  TokenDistribution distribution;
  std::vector<std::string> warnings;
};

PredictionTrace run_prediction(const CoocMatrix& s, const Vocabulary& vocab,
                               const std::vector<std::string>& sequence,
                               const PredictionOptions& options = {});

TokenDistribution next_token_distribution(const CoocMatrix& s, const Vocabulary& vocab,
                                          const std::vector<std::string>& sequence);

}  // namespace ctxproj
