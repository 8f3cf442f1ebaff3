#pragma once

#include "ttvseg/kernels.hpp"

namespace ttvseg::kernels {

#if defined(TTVSEG_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(TTVSEG_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

}  // namespace ttvseg::kernels
