#include "ist/kernels.hpp"

#include <atomic>
#include <cstddef>

namespace ist::kernels {

namespace {

std::atomic<bool> g_parallel{true};

// Row i of the product; shared by the serial and parallel drivers so both
// accumulate every element in the same order.
inline void mul_row(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b,
                    ComplexSquareMatrix& out, std::size_t i) {
    const std::size_t n = a.dim();
    const cdouble* arow = a.data() + i * n;
    cdouble* orow = out.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) {
        const cdouble aik = arow[k];
        if (aik == cdouble(0.0)) continue;
        const cdouble* brow = b.data() + k * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
    }
}

constexpr std::size_t kParallelCutoff = 24;  // below this the fork overhead dominates

}  // namespace

ComplexSquareMatrix matmul_serial(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
    if (a.dim() != b.dim()) throw invalid_input("matmul: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexSquareMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) mul_row(a, b, out, i);
    return out;
}

ComplexSquareMatrix matmul_parallel(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
    if (a.dim() != b.dim()) throw invalid_input("matmul: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexSquareMatrix out(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        mul_row(a, b, out, static_cast<std::size_t>(i));
    return out;
}

ComplexSquareMatrix matmul(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
    if (g_parallel.load(std::memory_order_relaxed) && a.dim() >= kParallelCutoff)
        return matmul_parallel(a, b);
    return matmul_serial(a, b);
}

CVector matvec_serial(const ComplexSquareMatrix& a, const CVector& x) {
    if (a.dim() != x.size()) throw invalid_input("matvec: dimension mismatch");
    const std::size_t n = a.dim();
    CVector y(n, cdouble(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const cdouble* arow = a.data() + i * n;
        cdouble s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += arow[j] * x[j];
        y[i] = s;
    }
    return y;
}

CVector matvec(const ComplexSquareMatrix& a, const CVector& x) { return matvec_serial(a, x); }

ComplexSquareMatrix conjugate_by(const ComplexSquareMatrix& u, const ComplexSquareMatrix& m) {
    return matmul(matmul(u, m), adjoint(u));
}

void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

}  // namespace ist::kernels
