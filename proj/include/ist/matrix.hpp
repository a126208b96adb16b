#pragma once

#include <cstddef>
#include <vector>

#include "ist/types.hpp"

namespace ist {

/// Dense complex square matrix, row-major storage.
/// The container never assumes structure; Hermiticity/unitarity are
/// properties checked on demand by free functions below.
class ComplexSquareMatrix {
  public:
    ComplexSquareMatrix() = default;
    explicit ComplexSquareMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}
    ComplexSquareMatrix(std::size_t dim, std::vector<cdouble> entries);

    static ComplexSquareMatrix identity(std::size_t dim);
    static ComplexSquareMatrix diagonal(const std::vector<cdouble>& d);

    std::size_t dim() const { return dim_; }

    cdouble& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    cdouble* data() { return entries_.data(); }
    const cdouble* data() const { return entries_.data(); }

    ComplexSquareMatrix& operator+=(const ComplexSquareMatrix& o);
    ComplexSquareMatrix& operator-=(const ComplexSquareMatrix& o);
    ComplexSquareMatrix& operator*=(cdouble s);

  private:
    std::size_t dim_ = 0;
    std::vector<cdouble> entries_;
};

using CVector = std::vector<cdouble>;

ComplexSquareMatrix operator+(ComplexSquareMatrix a, const ComplexSquareMatrix& b);
ComplexSquareMatrix operator-(ComplexSquareMatrix a, const ComplexSquareMatrix& b);
ComplexSquareMatrix operator*(cdouble s, ComplexSquareMatrix a);

ComplexSquareMatrix adjoint(const ComplexSquareMatrix& m);
cdouble trace(const ComplexSquareMatrix& m);

double one_norm(const ComplexSquareMatrix& m);
double frobenius_norm(const ComplexSquareMatrix& m);
double max_abs(const ComplexSquareMatrix& m);
bool all_finite(const ComplexSquareMatrix& m);

/// Largest-singular-value estimate by power iteration on M†M.
/// Deterministic start vector; good to a few digits, which is all the
/// residual normalizations need.
double op_norm_est(const ComplexSquareMatrix& m);

double hermiticity_defect(const ComplexSquareMatrix& m);
double unitarity_defect(const ComplexSquareMatrix& m);

// vector helpers
double vec_norm(const CVector& v);
cdouble vec_dot(const CVector& a, const CVector& b);  // conjugate-linear in a
void vec_normalize(CVector& v);

/// Phase convention: rotate so the largest-magnitude component is real
/// and positive. Makes eigenvector output reproducible.
void fix_phase(CVector& v);

CVector basis_vector(std::size_t dim, std::size_t index);

}  // namespace ist
