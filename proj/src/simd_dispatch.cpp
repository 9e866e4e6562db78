#include "torushu/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace torushu::simd {

#if defined(TORUSHU_HAVE_AVX2)
namespace detail {
const Kernels* avx2_kernels_impl();
}
#endif

const Kernels* avx2_kernels() {
#if defined(TORUSHU_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return detail::avx2_kernels_impl();
#endif
  return nullptr;
}

const Kernels& active_kernels() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("TORUSHU_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const Kernels* avx2 = avx2_kernels();
    if (env && std::strcmp(env, "avx2") == 0 && avx2) return avx2;
    return avx2 ? avx2 : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace torushu::simd
