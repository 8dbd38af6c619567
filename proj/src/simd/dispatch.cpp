#include "fracmono/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace fracmono::simd {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

namespace {

const KernelTable& resolve() {
    const char* env = std::getenv("FRACMONO_SIMD");
    const KernelTable* avx2 = avx2_kernels_or_null();
    const bool usable = avx2 != nullptr && cpu_has_avx2();
    if (env != nullptr && std::strcmp(env, "avx2") == 0)
        return usable ? *avx2 : scalar_kernels();
    if (env == nullptr && usable) return *avx2;
    // "scalar" and anything unrecognized both take the reference path.
    return scalar_kernels();
}

} // namespace

const KernelTable& kernels() {
    static const KernelTable& table = resolve();
    return table;
}

} // namespace fracmono::simd
