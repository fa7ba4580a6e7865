#pragma once

#include <cstdint>
#include <filesystem>

#include "ctxproj/directional.hpp"
#include "ctxproj/matrix.hpp"
#include "ctxproj/multihead.hpp"

namespace ctxproj {

// Triplet text for general rectangular matrices; same body as the
// co-occurrence format but with an explicit shape in the header
// ("mat v1 rows=<r> cols=<c>"), since parameter matrices are not square.
void save_dense_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix load_dense_matrix(const std::filesystem::path& path);

// One file per matrix inside dir (w_query.mat, w_key.mat, w_value.mat) plus
// a manifest carrying the dimensions and the seed the bundle was built from.
void save_attention_params(const AttentionParams& params,
                           const std::filesystem::path& dir, std::uint64_t seed = 0);

struct LoadedAttentionParams {
  AttentionParams params;
  std::uint64_t seed = 0;
};
LoadedAttentionParams load_attention_params(const std::filesystem::path& dir);

// Manifest plus head<k>_* matrix files and the output projection.
void save_head_set(const HeadSet& heads, const std::filesystem::path& dir);
HeadSet load_head_set(const std::filesystem::path& dir);

}  // namespace ctxproj
