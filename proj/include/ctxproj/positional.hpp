#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ctxproj/corpus.hpp"
#include "ctxproj/matrix.hpp"
#include "ctxproj/projection.hpp"

namespace ctxproj {

enum class PositionalScheme { sinusoidal, seeded_gaussian };

// Position encoding living in vocabulary space, added to the selector rows.
struct PositionalMatrix {
  std::size_t length = 0;
  std::size_t vocab_size = 0;
  Matrix rows;
  PositionalScheme scheme = PositionalScheme::sinusoidal;
  double amplitude = 1.0;
};

// (Q+P) S (Q+P)^T split into its four interaction blocks. total is computed
// directly from the augmented selector, not from the blocks, so the
// block-sum identity is a real cross-check.
struct PositionalDecomposition {
  Matrix content_content;
  Matrix content_position;
  Matrix position_content;
  Matrix position_position;
  Matrix total;
};

struct PositionalParams {
  PositionalScheme scheme = PositionalScheme::sinusoidal;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

struct OrderSensitivityReport {
  double distance_without_positions = 0.0;
  double distance_with_positions = 0.0;
  // Kernel of the first ordering re-indexed onto the second ordering's
  // positions, next to the second ordering's own kernel.
  Matrix aligned_total_first;
  Matrix total_second;
  std::vector<std::size_t> alignment;  // position r of seq_b came from alignment[r] in seq_a
};

PositionalMatrix positional_matrix(std::size_t length, std::size_t vocab_size,
                                   PositionalScheme scheme, double amplitude,
                                   std::uint64_t seed);

PositionalDecomposition project_positional(const Selector& selector,
                                           const PositionalMatrix& positions,
                                           const CoocMatrix& s);

OrderSensitivityReport order_sensitivity_report(const CoocMatrix& s,
                                                const Vocabulary& vocab,
                                                const std::vector<std::string>& seq_a,
                                                const std::vector<std::string>& seq_b,
                                                const PositionalParams& params);

}  // namespace ctxproj
