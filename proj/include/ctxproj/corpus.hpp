#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxproj/matrix.hpp"

namespace ctxproj {

// Token <-> index bijection. Indices follow first occurrence in the stream
// that built the vocabulary, so identical input always yields identical ids.
struct Vocabulary {
  std::vector<std::string> tokens;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return tokens.size(); }
  bool contains(std::string_view token) const;
  // Throws UnknownTokenError.
  std::size_t id_of(const std::string& token) const;
};

// Global association operator over the vocabulary: n x n, entries >= 0,
// symmetric when built that way. Dense storage; this library targets
// desk-scale vocabularies.
struct CoocMatrix {
  std::size_t n = 0;
  Matrix entries;
  bool symmetric = false;

  // Validates non-negativity, squareness and (when claimed) symmetry.
  static CoocMatrix from_dense(Matrix entries, bool symmetric);
};

enum class Weighting { uniform, inverse_distance };

struct CoocOptions {
  std::size_t window = 2;
  Weighting weighting = Weighting::uniform;
  bool symmetric = true;
  bool exclude_self = true;
};

std::vector<std::string> tokenize(std::istream& input);

Vocabulary build_vocabulary(const std::vector<std::string>& token_stream);

// S[i][j] accumulates w(|p-q|) over position pairs p < q <= p + window with
// token(p)=i, token(q)=j; symmetric mode adds both orientations, asymmetric
// mode only the forward one. exclude_self drops pairs whose two tokens are
// the same type (the diagonal).
CoocMatrix count_cooccurrences(const std::vector<std::string>& token_stream,
                               const Vocabulary& vocab,
                               const CoocOptions& options = {});

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

// Sparse triplet text: header "cooc v1 n=<n> symmetric=<0|1>", then
// "<i>\t<j>\t<value>" lines. Values are written with shortest round-trip
// precision, so save/load is exact. Symmetric matrices store each pair once.
void save_matrix(const CoocMatrix& matrix, const std::filesystem::path& path);
CoocMatrix load_matrix(const std::filesystem::path& path);

void save_model(const CoocMatrix& matrix, const Vocabulary& vocab,
                const std::filesystem::path& matrix_path,
                const std::filesystem::path& vocab_path);
std::pair<CoocMatrix, Vocabulary> load_model(const std::filesystem::path& matrix_path,
                                             const std::filesystem::path& vocab_path);

std::size_t nonzero_count(const CoocMatrix& matrix);

}  // namespace ctxproj
