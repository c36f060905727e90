#pragma once

#include <cstddef>
#include <cstdint>

// Inner-loop kernels used by the miners and the autoencoder. Each entry has
// a scalar reference implementation and an AVX2 variant; the active table is
// picked once at startup from CPU capabilities (override with the
// ARMAE_KERNELS environment variable: "scalar" or "avx2").

namespace armae::kern {

struct Kernels {
    // y = W x + b, W row-major [rows x cols]
    void (*matvec)(const double* w, const double* x, const double* b,
                   double* y, std::size_t rows, std::size_t cols);
    // y = W^T x, W row-major [rows x cols], x length rows, y length cols
    void (*matvec_t)(const double* w, const double* x, double* y,
                     std::size_t rows, std::size_t cols);
    // W += x y^T (rank-1 accumulate), W row-major [rows x cols]
    void (*ger_acc)(double* w, const double* x, const double* y,
                    std::size_t rows, std::size_t cols);
    // popcount(a & b) over n 64-bit blocks
    std::uint64_t (*and_popcount)(const std::uint64_t* a,
                                  const std::uint64_t* b, std::size_t n);
    // acc &= b over n blocks
    void (*and_inplace)(std::uint64_t* acc, const std::uint64_t* b,
                        std::size_t n);
    std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t n);
    // Adam step with precomputed bias corrections bc1 = 1-b1^t, bc2 = 1-b2^t
    void (*adam_update)(double* p, double* m, double* v, const double* g,
                        std::size_t n, double lr, double b1, double b2,
                        double eps, double bc1, double bc2);
    const char* name;
};

const Kernels& scalar_kernels();
const Kernels& avx2_kernels();   // falls back to scalar when unsupported
bool avx2_available();

const Kernels& active();
void set_active(const Kernels& k);  // for equivalence tests

}  // namespace armae::kern
