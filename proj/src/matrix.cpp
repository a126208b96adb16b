#include "ist/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "ist/kernels.hpp"

namespace ist {

ComplexSquareMatrix::ComplexSquareMatrix(std::size_t dim, std::vector<cdouble> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_)
        throw invalid_input("ComplexSquareMatrix: entry count does not match dim*dim");
}

ComplexSquareMatrix ComplexSquareMatrix::identity(std::size_t dim) {
    ComplexSquareMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexSquareMatrix ComplexSquareMatrix::diagonal(const std::vector<cdouble>& d) {
    ComplexSquareMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexSquareMatrix& ComplexSquareMatrix::operator+=(const ComplexSquareMatrix& o) {
    if (o.dim_ != dim_) throw invalid_input("matrix add: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
}

ComplexSquareMatrix& ComplexSquareMatrix::operator-=(const ComplexSquareMatrix& o) {
    if (o.dim_ != dim_) throw invalid_input("matrix sub: dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
}

ComplexSquareMatrix& ComplexSquareMatrix::operator*=(cdouble s) {
    for (auto& e : entries_) e *= s;
    return *this;
}

ComplexSquareMatrix operator+(ComplexSquareMatrix a, const ComplexSquareMatrix& b) {
    a += b;
    return a;
}

ComplexSquareMatrix operator-(ComplexSquareMatrix a, const ComplexSquareMatrix& b) {
    a -= b;
    return a;
}

ComplexSquareMatrix operator*(cdouble s, ComplexSquareMatrix a) {
    a *= s;
    return a;
}

ComplexSquareMatrix adjoint(const ComplexSquareMatrix& m) {
    const std::size_t n = m.dim();
    ComplexSquareMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}

cdouble trace(const ComplexSquareMatrix& m) {
    cdouble t = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) t += m(i, i);
    return t;
}

double one_norm(const ComplexSquareMatrix& m) {
    const std::size_t n = m.dim();
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double frobenius_norm(const ComplexSquareMatrix& m) {
    double s = 0.0;
    const std::size_t nn = m.dim() * m.dim();
    for (std::size_t i = 0; i < nn; ++i) s += std::norm(m.data()[i]);
    return std::sqrt(s);
}

double max_abs(const ComplexSquareMatrix& m) {
    double best = 0.0;
    const std::size_t nn = m.dim() * m.dim();
    for (std::size_t i = 0; i < nn; ++i) best = std::max(best, std::abs(m.data()[i]));
    return best;
}

bool all_finite(const ComplexSquareMatrix& m) {
    const std::size_t nn = m.dim() * m.dim();
    for (std::size_t i = 0; i < nn; ++i) {
        const cdouble& e = m.data()[i];
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    }
    return true;
}

double op_norm_est(const ComplexSquareMatrix& m) {
    const std::size_t n = m.dim();
    if (n == 0) return 0.0;
    CVector v(n, cdouble(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
    double sigma = 0.0;
    for (int it = 0; it < 60; ++it) {
        CVector w = kernels::matvec_serial(m, v);
        // v <- M^H w
        CVector u(n, cdouble(0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) u[j] += std::conj(m(i, j)) * w[i];
        const double nu = vec_norm(u);
        if (nu == 0.0) return 0.0;
        const double next = std::sqrt(nu);
        for (auto& x : u) x /= nu;
        v = std::move(u);
        if (it > 3 && std::abs(next - sigma) <= 1e-12 * std::max(1.0, next)) return next;
        sigma = next;
    }
    return sigma;
}

double hermiticity_defect(const ComplexSquareMatrix& m) {
    return frobenius_norm(m - adjoint(m));
}

double unitarity_defect(const ComplexSquareMatrix& m) {
    return frobenius_norm(kernels::matmul_serial(adjoint(m), m) -
                          ComplexSquareMatrix::identity(m.dim()));
}

double vec_norm(const CVector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

cdouble vec_dot(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw invalid_input("vec_dot: dimension mismatch");
    cdouble s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void vec_normalize(CVector& v) {
    const double n = vec_norm(v);
    if (n == 0.0) throw invalid_input("vec_normalize: zero vector");
    for (auto& x : v) x /= n;
}

void fix_phase(CVector& v) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    const cdouble phase = v[imax] / best;
    for (auto& x : v) x /= phase;
}

CVector basis_vector(std::size_t dim, std::size_t index) {
    if (index >= dim) throw invalid_input("basis_vector: index out of range");
    CVector v(dim, cdouble(0.0));
    v[index] = 1.0;
    return v;
}

}  // namespace ist
