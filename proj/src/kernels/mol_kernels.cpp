#include <cstdlib>
#include <cstring>

#include "mol_kernels_impl.hpp"

namespace bautin::kernels {

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", &rhs_scalar, &axpy_scalar, &combine_scalar};
  return set;
}

const KernelSet* avx2_kernels() {
#if defined(BAUTIN_WITH_AVX2)
  static const KernelSet set{"avx2", &rhs_avx2, &axpy_avx2, &combine_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &set : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  static const KernelSet& chosen = [&]() -> const KernelSet& {
    const char* env = std::getenv("BAUTIN_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return scalar_kernels();
    const KernelSet* fast = avx2_kernels();
    return fast != nullptr ? *fast : scalar_kernels();
  }();
  return chosen;
}

}  // namespace bautin::kernels
