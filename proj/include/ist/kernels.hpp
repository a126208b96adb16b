#pragma once

#include "ist/matrix.hpp"

namespace ist::kernels {

/// Compute kernels come in two flavours: a serial reference and an
/// OpenMP row-parallel version. Both produce bitwise-identical results
/// because each output element is accumulated in the same order; the
/// parallel one only distributes rows across threads.

ComplexSquareMatrix matmul_serial(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);
ComplexSquareMatrix matmul_parallel(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);

/// Policy-aware entry point used by the rest of the library.
ComplexSquareMatrix matmul(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);

CVector matvec_serial(const ComplexSquareMatrix& a, const CVector& x);
CVector matvec(const ComplexSquareMatrix& a, const CVector& x);

/// a * b * adjoint(a)
ComplexSquareMatrix conjugate_by(const ComplexSquareMatrix& u, const ComplexSquareMatrix& m);

/// Globally enable/disable the parallel kernels (default: enabled).
void set_parallel(bool on);
bool parallel_enabled();

}  // namespace ist::kernels
