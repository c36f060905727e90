#include "armae/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <bit>
#include <cmath>

namespace armae::kern {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void matvec_avx2(const double* w, const double* x, const double* b,
                 double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = w + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wr + c),
                                  _mm256_loadu_pd(x + c), acc);
        }
        double tail = 0.0;
        for (; c < cols; ++c) tail += wr[c] * x[c];
        y[r] = hsum(acc) + tail + b[r];
    }
}

void matvec_t_avx2(const double* w, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = w + r * cols;
        const __m256d xr = _mm256_set1_pd(x[r]);
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(y + c);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(wr + c), xr, acc);
            _mm256_storeu_pd(y + c, acc);
        }
        for (; c < cols; ++c) y[c] += wr[c] * x[r];
    }
}

void ger_acc_avx2(double* w, const double* x, const double* y,
                  std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* wr = w + r * cols;
        const __m256d xr = _mm256_set1_pd(x[r]);
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            __m256d acc = _mm256_loadu_pd(wr + c);
            acc = _mm256_fmadd_pd(xr, _mm256_loadu_pd(y + c), acc);
            _mm256_storeu_pd(wr + c, acc);
        }
        for (; c < cols; ++c) wr[c] += x[r] * y[c];
    }
}

std::uint64_t and_popcount_avx2(const std::uint64_t* a,
                                const std::uint64_t* b, std::size_t n) {
    std::uint64_t total = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i v = _mm256_and_si256(va, vb);
        alignas(32) std::uint64_t tmp[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(tmp), v);
        total += std::popcount(tmp[0]) + std::popcount(tmp[1]) +
                 std::popcount(tmp[2]) + std::popcount(tmp[3]);
    }
    for (; i < n; ++i) total += std::popcount(a[i] & b[i]);
    return total;
}

void and_inplace_avx2(std::uint64_t* acc, const std::uint64_t* b,
                      std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i),
                            _mm256_and_si256(va, vb));
    }
    for (; i < n; ++i) acc[i] &= b[i];
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += static_cast<std::uint64_t>(std::popcount(a[i]));
    return total;
}

void adam_update_avx2(double* p, double* m, double* v, const double* g,
                      std::size_t n, double lr, double b1, double b2,
                      double eps, double bc1, double bc2) {
    const __m256d vb1 = _mm256_set1_pd(b1);
    const __m256d vb1c = _mm256_set1_pd(1.0 - b1);
    const __m256d vb2 = _mm256_set1_pd(b2);
    const __m256d vb2c = _mm256_set1_pd(1.0 - b2);
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vbc1 = _mm256_set1_pd(bc1);
    const __m256d vbc2 = _mm256_set1_pd(bc2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d gi = _mm256_loadu_pd(g + i);
        __m256d mi = _mm256_fmadd_pd(vb1c, gi, _mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)));
        __m256d vi = _mm256_fmadd_pd(vb2c, _mm256_mul_pd(gi, gi),
                                     _mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        __m256d mhat = _mm256_div_pd(mi, vbc1);
        __m256d vhat = _mm256_div_pd(vi, vbc2);
        __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
    }
    for (; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k = {
        matvec_avx2,     matvec_t_avx2,  ger_acc_avx2,
        and_popcount_avx2, and_inplace_avx2, popcount_avx2,
        adam_update_avx2, "avx2",
    };
    return k;
}

}  // namespace armae::kern

#else

namespace armae::kern {
const Kernels& avx2_kernels() { return scalar_kernels(); }
}  // namespace armae::kern

#endif
