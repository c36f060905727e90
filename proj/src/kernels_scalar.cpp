#include "armae/kernels.hpp"

#include <bit>
#include <cmath>

namespace armae::kern {
namespace {

void matvec_scalar(const double* w, const double* x, const double* b,
                   double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = w + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * x[c];
        y[r] = acc + b[r];
    }
}

void matvec_t_scalar(const double* w, const double* x, double* y,
                     std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* wr = w + r * cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols; ++c) y[c] += wr[c] * xr;
    }
}

void ger_acc_scalar(double* w, const double* x, const double* y,
                    std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* wr = w + r * cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols; ++c) wr[c] += xr * y[c];
    }
}

std::uint64_t and_popcount_scalar(const std::uint64_t* a,
                                  const std::uint64_t* b, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    return total;
}

void and_inplace_scalar(std::uint64_t* acc, const std::uint64_t* b,
                        std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] &= b[i];
}

std::uint64_t popcount_scalar(const std::uint64_t* a, std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += static_cast<std::uint64_t>(std::popcount(a[i]));
    return total;
}

void adam_update_scalar(double* p, double* m, double* v, const double* g,
                        std::size_t n, double lr, double b1, double b2,
                        double eps, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        matvec_scalar,     matvec_t_scalar,  ger_acc_scalar,
        and_popcount_scalar, and_inplace_scalar, popcount_scalar,
        adam_update_scalar, "scalar",
    };
    return k;
}

}  // namespace armae::kern
