#pragma once

// Independent reference implementations the tests check the library
// against. Everything here is deliberately written the slow, obvious way
// and shares no code with the library paths it verifies.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ctxproj/corpus.hpp"
#include "ctxproj/matrix.hpp"

namespace oracles {

// Plain triple-loop product, sequential accumulation.
ctxproj::Matrix naive_matmul(const ctxproj::Matrix& a, const ctxproj::Matrix& b);

// Softmax evaluated in extended precision without max subtraction.
std::vector<double> naive_softmax(const std::vector<double>& scores);

// Eigenvalues of a symmetric matrix by classic two-sided Jacobi sweeps,
// sorted by descending absolute value. For symmetric input these absolute
// values are the singular values.
std::vector<double> symmetric_singular_values(const ctxproj::Matrix& a);

// Frobenius error of the best rank-k approximation: sqrt of the tail sum of
// squared singular values.
double eckart_young_floor(const ctxproj::Matrix& symmetric, std::size_t rank);

// Deterministic random fixtures.
ctxproj::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                              double lo = -1.0, double hi = 1.0);
ctxproj::CoocMatrix random_cooc(std::mt19937_64& rng, std::size_t n,
                                bool zero_diagonal = true);
std::vector<std::size_t> random_ids(std::mt19937_64& rng, std::size_t length,
                                    std::size_t n);
std::vector<double> random_vector(std::mt19937_64& rng, std::size_t length,
                                  double lo = -1.0, double hi = 1.0);

}  // namespace oracles
