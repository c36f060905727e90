#include "armae/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace armae::kern {
namespace {

const Kernels* g_active = nullptr;

const Kernels& pick() {
    if (const char* env = std::getenv("ARMAE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_kernels();
        if (std::strcmp(env, "avx2") == 0) return avx2_kernels();
    }
    return avx2_available() ? avx2_kernels() : scalar_kernels();
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
#if defined(__GNUC__) || defined(__clang__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
#else
    return false;
#endif
}

const Kernels& active() {
    if (!g_active) g_active = &pick();
    return *g_active;
}

void set_active(const Kernels& k) { g_active = &k; }

}  // namespace armae::kern
