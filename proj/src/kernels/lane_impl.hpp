#pragma once

#include "ctxproj/kernels.hpp"

namespace ctxproj::kernels {

const Ops& scalar_ops();
#if defined(CTXPROJ_HAVE_AVX2)
const Ops& avx2_ops();
#endif

}  // namespace ctxproj::kernels
