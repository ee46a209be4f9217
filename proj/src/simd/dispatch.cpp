#include <cstdlib>
#include <string_view>

#include "nnph/simd/kernels.hpp"

namespace nnph::simd {

#if defined(NNPH_HAVE_AVX2_TU)
namespace avx2 {
const KernelTable& table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(NNPH_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2::table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() {
    const char* forced = std::getenv("NNPH_SIMD");
    const std::string_view choice = forced ? forced : "";
    if (choice == "scalar") return scalar_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace nnph::simd
