#include <cstring>

#include "slitstone/simd/kernels.hpp"

namespace slitstone::simd {

bool avx2_available() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* select_kernels(const char* name) {
    if (name == nullptr || std::strcmp(name, "auto") == 0) {
        return avx2_available() ? avx2_kernels() : &scalar_kernels();
    }
    if (std::strcmp(name, "scalar") == 0) return &scalar_kernels();
    if (std::strcmp(name, "avx2") == 0) return avx2_available() ? avx2_kernels() : nullptr;
    return nullptr;
}

const KernelTable& kernels() {
    static const KernelTable* table = select_kernels("auto");
    return *table;
}

}  // namespace slitstone::simd
