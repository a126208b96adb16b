#include "ist/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ist/kernels.hpp"

namespace ist {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_upper_triangular(const ComplexSquareMatrix& m) {
    const std::size_t n = m.dim();
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (m(i, j) != cdouble(0.0)) return false;
    return true;
}

bool is_lower_triangular(const ComplexSquareMatrix& m) {
    const std::size_t n = m.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (m(i, j) != cdouble(0.0)) return false;
    return true;
}

ComplexSquareMatrix reverse_permute(const ComplexSquareMatrix& m) {
    const std::size_t n = m.dim();
    ComplexSquareMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = m(n - 1 - i, n - 1 - j);
    return r;
}

// Diagonal similarity with radix-2 factors equalizing row/column norms
// (EISPACK-style). Exact in floating point; restores the conditioning of
// the graded ladder-operator combinations this toolkit feeds in.
void balance(ComplexSquareMatrix& m, std::vector<double>& scale) {
    const std::size_t n = m.dim();
    scale.assign(n, 1.0);
    bool done = false;
    int sweeps = 0;
    while (!done && sweeps++ < 100) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(m(j, i));
                r += std::abs(m(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            while (c < r / 2.0) {
                c *= 4.0;
                r /= 4.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 4.0;
                r *= 4.0;
                f /= 2.0;
            }
            if (f != 1.0) {
                scale[i] *= f;
                const double g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) m(i, j) *= g;  // row i
                for (std::size_t j = 0; j < n; ++j) m(j, i) *= f;  // col i
                done = false;
            }
        }
    }
}

struct Givens {
    double c = 1.0;
    cdouble s = 0.0;
};

Givens make_givens(cdouble f, cdouble g) {
    Givens gv;
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) return gv;
    const double d = std::hypot(af, ag);
    if (af == 0.0) {
        gv.c = 0.0;
        gv.s = std::conj(g) / ag;
    } else {
        gv.c = af / d;
        gv.s = (f / af) * std::conj(g) / d;
    }
    return gv;
}

struct SchurResult {
    ComplexSquareMatrix t;  // upper triangular
    ComplexSquareMatrix z;  // unitary, input = z t z^H
    int iterations = 0;
};

// Householder reduction to upper Hessenberg form with accumulated Q.
void hessenberg(ComplexSquareMatrix& h, ComplexSquareMatrix& q) {
    const std::size_t n = h.dim();
    q = ComplexSquareMatrix::identity(n);
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the column tail
        CVector v(m);
        double xnorm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            v[i] = h(k + 1 + i, k);
            xnorm2 += std::norm(v[i]);
        }
        const double xnorm = std::sqrt(xnorm2);
        if (xnorm == 0.0) continue;
        cdouble phase = 1.0;
        if (std::abs(v[0]) > 0.0) phase = v[0] / std::abs(v[0]);
        const cdouble alpha = -phase * xnorm;
        v[0] -= alpha;
        double vnorm2 = 0.0;
        for (const auto& x : v) vnorm2 += std::norm(x);
        if (vnorm2 == 0.0) continue;
        const double tau = 2.0 / vnorm2;
        // left: rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            cdouble w = 0.0;
            for (std::size_t i = 0; i < m; ++i) w += std::conj(v[i]) * h(k + 1 + i, j);
            w *= tau;
            for (std::size_t i = 0; i < m; ++i) h(k + 1 + i, j) -= v[i] * w;
        }
        // right: cols k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            cdouble w = 0.0;
            for (std::size_t j = 0; j < m; ++j) w += h(i, k + 1 + j) * v[j];
            w *= tau;
            for (std::size_t j = 0; j < m; ++j) h(i, k + 1 + j) -= w * std::conj(v[j]);
        }
        // accumulate q <- q P
        for (std::size_t i = 0; i < n; ++i) {
            cdouble w = 0.0;
            for (std::size_t j = 0; j < m; ++j) w += q(i, k + 1 + j) * v[j];
            w *= tau;
            for (std::size_t j = 0; j < m; ++j) q(i, k + 1 + j) -= w * std::conj(v[j]);
        }
        // clean the annihilated entries
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

cdouble wilkinson_shift(const ComplexSquareMatrix& h, std::size_t p, std::size_t q) {
    const cdouble a = h(p, p), b = h(p, q), c = h(q, p), d = h(q, q);
    const cdouble tr = a + d;
    const cdouble det = a * d - b * c;
    cdouble disc = std::sqrt(tr * tr - 4.0 * det);
    if (std::abs(tr + disc) < std::abs(tr - disc)) disc = -disc;
    const cdouble r1 = 0.5 * (tr + disc);
    cdouble r2;
    if (std::abs(r1) > 0.0)
        r2 = det / r1;
    else
        r2 = tr - r1;
    return (std::abs(r1 - d) < std::abs(r2 - d)) ? r1 : r2;
}

// Explicitly shifted QR iteration on a Hessenberg matrix, Givens based.
SchurResult schur_decompose(ComplexSquareMatrix h, ComplexSquareMatrix z) {
    const std::size_t n = h.dim();
    SchurResult out;
    if (n == 0) {
        out.t = h;
        out.z = z;
        return out;
    }
    const double hnorm = std::max(one_norm(h), std::numeric_limits<double>::min());
    const int max_total = 60 * static_cast<int>(n) + 100;
    int total = 0;

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    int stall = 0;
    while (hi > 0) {
        // active block [lo..hi]: scan up to the first negligible subdiagonal
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            double ref = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (ref == 0.0) ref = hnorm;
            if (sub <= kEps * ref) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {  // 1x1 block converged
            --hi;
            stall = 0;
            continue;
        }

        if (++total > max_total)
            throw numeric_failure("eig: QR iteration failed to converge", total);

        cdouble mu;
        if (++stall % 12 == 0) {
            double ex = std::abs(h(hi, hi - 1));
            if (hi - 1 > lo) ex += std::abs(h(hi - 1, hi - 2));
            mu = h(hi, hi) + cdouble(1.5 * ex, 0.0);
        } else {
            mu = wilkinson_shift(h, hi - 1, hi);
        }

        for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) -= mu;
        std::vector<Givens> rots(hi - lo);
        for (std::ptrdiff_t k = lo; k < hi; ++k) {
            const Givens gv = make_givens(h(k, k), h(k + 1, k));
            rots[k - lo] = gv;
            for (std::size_t j = k; j < n; ++j) {
                const cdouble t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = gv.c * t1 + gv.s * t2;
                h(k + 1, j) = -std::conj(gv.s) * t1 + gv.c * t2;
            }
            h(k + 1, k) = 0.0;  // annihilated by construction
        }
        for (std::ptrdiff_t k = lo; k < hi; ++k) {
            const Givens gv = rots[k - lo];
            const std::ptrdiff_t top = std::min<std::ptrdiff_t>(k + 1, hi);
            for (std::ptrdiff_t i = 0; i <= top; ++i) {
                const cdouble t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = gv.c * t1 + std::conj(gv.s) * t2;
                h(i, k + 1) = -gv.s * t1 + gv.c * t2;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const cdouble t1 = z(i, k), t2 = z(i, k + 1);
                z(i, k) = gv.c * t1 + std::conj(gv.s) * t2;
                z(i, k + 1) = -gv.s * t1 + gv.c * t2;
            }
        }
        for (std::ptrdiff_t i = lo; i <= hi; ++i) h(i, i) += mu;
    }
    // wipe rounding dust below the diagonal
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
    out.t = std::move(h);
    out.z = std::move(z);
    out.iterations = total;
    return out;
}

// Eigenvector of the triangular factor for the eigenvalue at index k,
// back-substitution with small-divisor perturbation, then y = Z x.
CVector schur_vector(const ComplexSquareMatrix& t, const ComplexSquareMatrix& z, std::size_t k) {
    const std::size_t n = t.dim();
    const double smlnum = std::max(kEps * one_norm(t), 1e-300);
    CVector x(k + 1, cdouble(0.0));
    x[k] = 1.0;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) - 1; i >= 0; --i) {
        cdouble s = 0.0;
        for (std::size_t j = i + 1; j <= k; ++j) s += t(i, j) * x[j];
        cdouble d = t(i, i) - t(k, k);
        if (std::abs(d) < smlnum) d = smlnum;
        x[i] = -s / d;
        const double ax = std::abs(x[i]);
        if (ax > 1e120) {
            for (std::size_t j = i; j <= k; ++j) x[j] /= ax;
        }
    }
    CVector y(n, cdouble(0.0));
    for (std::size_t j = 0; j <= k; ++j) {
        const cdouble xj = x[j];
        if (xj == cdouble(0.0)) continue;
        for (std::size_t i = 0; i < n; ++i) y[i] += z(i, j) * xj;
    }
    vec_normalize(y);
    return y;
}

struct Lu {
    ComplexSquareMatrix lu;
    std::vector<std::size_t> piv;
    bool singular = false;
};

Lu lu_factor(ComplexSquareMatrix m, bool perturb_zero_pivots) {
    const std::size_t n = m.dim();
    Lu f{std::move(m), std::vector<std::size_t>(n), false};
    const double floor_piv = std::max(kEps * one_norm(f.lu), 1e-300);
    std::iota(f.piv.begin(), f.piv.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double a = std::abs(f.lu(i, k));
            if (a > best) {
                best = a;
                p = i;
            }
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.piv[k], f.piv[p]);
        }
        if (std::abs(f.lu(k, k)) < floor_piv) {
            f.singular = true;
            if (perturb_zero_pivots)
                f.lu(k, k) = floor_piv;
            else
                throw numeric_failure("lu_factor: singular matrix", static_cast<int>(k));
        }
        const cdouble inv = 1.0 / f.lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cdouble l = f.lu(i, k) * inv;
            f.lu(i, k) = l;
            if (l == cdouble(0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

CVector lu_solve(const Lu& f, const CVector& b) {
    const std::size_t n = f.lu.dim();
    CVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.piv[i]];
    for (std::size_t i = 1; i < n; ++i) {
        cdouble s = x[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1; i >= 0; --i) {
        cdouble s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

// Column-pivoted Householder QR used for rank decisions; returns the
// permutation and the |diagonal| of R.
struct Cpqr {
    ComplexSquareMatrix r;
    std::vector<std::size_t> perm;
    std::vector<double> rdiag;
};

Cpqr cpqr(ComplexSquareMatrix m) {
    const std::size_t n = m.dim();
    Cpqr f{std::move(m), std::vector<std::size_t>(n), std::vector<double>(n, 0.0)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best_j = k;
        double best = -1.0;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < n; ++i) s += std::norm(f.r(i, j));
            if (s > best) {
                best = s;
                best_j = j;
            }
        }
        if (best_j != k) {
            for (std::size_t i = 0; i < n; ++i) std::swap(f.r(i, k), f.r(i, best_j));
            std::swap(f.perm[k], f.perm[best_j]);
        }
        double xnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) xnorm2 += std::norm(f.r(i, k));
        const double xnorm = std::sqrt(xnorm2);
        f.rdiag[k] = xnorm;
        if (xnorm == 0.0) continue;
        CVector v(n - k);
        for (std::size_t i = 0; i < n - k; ++i) v[i] = f.r(k + i, k);
        cdouble phase = 1.0;
        if (std::abs(v[0]) > 0.0) phase = v[0] / std::abs(v[0]);
        v[0] += phase * xnorm;
        double vnorm2 = 0.0;
        for (const auto& x : v) vnorm2 += std::norm(x);
        if (vnorm2 == 0.0) continue;
        const double tau = 2.0 / vnorm2;
        for (std::size_t j = k; j < n; ++j) {
            cdouble w = 0.0;
            for (std::size_t i = 0; i < n - k; ++i) w += std::conj(v[i]) * f.r(k + i, j);
            w *= tau;
            for (std::size_t i = 0; i < n - k; ++i) f.r(k + i, j) -= v[i] * w;
        }
        f.r(k, k) = -phase * xnorm;
        for (std::size_t i = k + 1; i < n; ++i) f.r(i, k) = 0.0;
    }
    return f;
}

std::vector<CVector> null_space_impl(const ComplexSquareMatrix& m, double rank_tol) {
    const std::size_t n = m.dim();
    const Cpqr f = cpqr(m);
    std::size_t rank = 0;
    while (rank < n && f.rdiag[rank] > rank_tol) ++rank;
    std::vector<CVector> basis;
    for (std::size_t t = rank; t < n; ++t) {
        CVector w(rank, cdouble(0.0));
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(rank) - 1; i >= 0; --i) {
            cdouble s = -f.r(i, t);
            for (std::size_t j = i + 1; j < rank; ++j) s -= f.r(i, j) * w[j];
            w[i] = s / f.r(i, i);
        }
        CVector v(n, cdouble(0.0));
        for (std::size_t j = 0; j < rank; ++j) v[f.perm[j]] = w[j];
        v[f.perm[t]] = 1.0;
        // modified Gram-Schmidt against what we already collected
        for (const auto& b : basis) {
            const cdouble c = vec_dot(b, v);
            for (std::size_t i = 0; i < n; ++i) v[i] -= c * b[i];
        }
        const double nv = vec_norm(v);
        if (nv < 1e-12) continue;
        for (auto& x : v) x /= nv;
        basis.push_back(std::move(v));
    }
    return basis;
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

double residual(const ComplexSquareMatrix& m, const CVector& v, cdouble beta) {
    if (m.dim() != v.size()) throw invalid_input("residual: dimension mismatch");
    CVector w = kernels::matvec(m, v);
    for (std::size_t i = 0; i < v.size(); ++i) w[i] -= beta * v[i];
    return vec_norm(w) / std::max(1.0, op_norm_est(m));
}

std::vector<CVector> null_space(const ComplexSquareMatrix& m, double rank_tol) {
    return null_space_impl(m, rank_tol);
}

CVector solve_linear(const ComplexSquareMatrix& m, const CVector& rhs) {
    if (m.dim() != rhs.size()) throw invalid_input("solve_linear: dimension mismatch");
    return lu_solve(lu_factor(m, false), rhs);
}

ComplexSquareMatrix mat_exp(const ComplexSquareMatrix& m, const TolerancePolicy&) {
    if (!all_finite(m)) throw invalid_input("mat_exp: non-finite entries");
    const std::size_t n = m.dim();
    if (n == 0) return m;

    // degree-13 Padé coefficients
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double nrm = one_norm(m);
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    ComplexSquareMatrix a = m;
    if (s > 0) a *= cdouble(std::ldexp(1.0, -s), 0.0);

    const ComplexSquareMatrix id = ComplexSquareMatrix::identity(n);
    const ComplexSquareMatrix a2 = kernels::matmul(a, a);
    const ComplexSquareMatrix a4 = kernels::matmul(a2, a2);
    const ComplexSquareMatrix a6 = kernels::matmul(a2, a4);

    ComplexSquareMatrix w = cdouble(b[13]) * a6 + cdouble(b[11]) * a4 + cdouble(b[9]) * a2;
    w = kernels::matmul(a6, w);
    w += cdouble(b[7]) * a6 + cdouble(b[5]) * a4 + cdouble(b[3]) * a2 + cdouble(b[1]) * id;
    const ComplexSquareMatrix u = kernels::matmul(a, w);

    ComplexSquareMatrix v = cdouble(b[12]) * a6 + cdouble(b[10]) * a4 + cdouble(b[8]) * a2;
    v = kernels::matmul(a6, v);
    v += cdouble(b[6]) * a6 + cdouble(b[4]) * a4 + cdouble(b[2]) * a2 + cdouble(b[0]) * id;

    // (v - u) x = (v + u)
    const ComplexSquareMatrix num = v + u;
    const Lu f = lu_factor(v - u, false);
    ComplexSquareMatrix x(n);
    CVector col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = num(i, j);
        const CVector sol = lu_solve(f, col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    for (int k = 0; k < s; ++k) x = kernels::matmul(x, x);
    return x;
}

EigenSystem eig(const ComplexSquareMatrix& m, const TolerancePolicy& tol) {
    if (!all_finite(m)) throw invalid_input("eig: non-finite entries");
    const std::size_t n = m.dim();
    EigenSystem out;
    if (n == 0) return out;

    // Schur form of the (possibly balanced / reverse-permuted) matrix.
    ComplexSquareMatrix bmat(0);
    std::vector<double> scale(n, 1.0);
    bool reversed = false;
    SchurResult sr;
    if (is_upper_triangular(m)) {
        bmat = m;
        sr.t = m;
        sr.z = ComplexSquareMatrix::identity(n);
    } else if (is_lower_triangular(m)) {
        reversed = true;
        bmat = reverse_permute(m);
        sr.t = bmat;
        sr.z = ComplexSquareMatrix::identity(n);
    } else {
        bmat = m;
        balance(bmat, scale);
        ComplexSquareMatrix h = bmat;
        ComplexSquareMatrix q(0);
        hessenberg(h, q);
        sr = schur_decompose(std::move(h), std::move(q));
    }

    // Candidate pairs in balanced coordinates.
    std::vector<cdouble> vals(n);
    std::vector<CVector> yvecs(n);
    for (std::size_t k = 0; k < n; ++k) {
        vals[k] = sr.t(k, k);
        yvecs[k] = schur_vector(sr.t, sr.z, k);
    }

    // Cluster detection: eigenvalue proximity or near-parallel balanced
    // eigenvectors mark candidates of one (possibly defective) eigenvalue.
    const double bnorm = std::max(one_norm(bmat), 1.0);
    const double prox_tol = 100.0 * static_cast<double>(n) * kEps * bnorm;
    DisjointSet ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(vals[i] - vals[j]) <= prox_tol ||
                std::abs(vec_dot(yvecs[i], yvecs[j])) >= 0.9999)
                ds.unite(i, j);
        }
    }
    std::vector<std::vector<std::size_t>> clusters;
    {
        std::vector<std::ptrdiff_t> slot(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = ds.find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<std::ptrdiff_t>(clusters.size());
                clusters.emplace_back();
            }
            clusters[slot[r]].push_back(i);
        }
    }

    const double mnorm2 = op_norm_est(m);
    struct Rec {
        cdouble val;
        CVector vec;
        int geo, alg;
        double res;
    };
    std::vector<Rec> recs;

    auto unbalance = [&](const CVector& y) {
        CVector v(n);
        if (reversed) {
            for (std::size_t i = 0; i < n; ++i) v[i] = y[n - 1 - i];
        } else {
            for (std::size_t i = 0; i < n; ++i) v[i] = scale[i] * y[i];
        }
        vec_normalize(v);
        fix_phase(v);
        return v;
    };
    auto raw_residual = [&](const CVector& v, cdouble beta) {
        CVector w = kernels::matvec(m, v);
        for (std::size_t i = 0; i < n; ++i) w[i] -= beta * v[i];
        return vec_norm(w) / std::max(1.0, mnorm2);
    };

    for (const auto& cluster : clusters) {
        if (cluster.size() == 1) {
            const std::size_t k = cluster[0];
            CVector v = unbalance(yvecs[k]);
            const double r = raw_residual(v, vals[k]);
            recs.push_back({vals[k], std::move(v), 1, 1, r});
            continue;
        }
        // Refine the cluster eigenvalue by Rayleigh-quotient iteration in
        // balanced coordinates, then take the genuine eigenvectors from a
        // rank-revealing null space.
        cdouble mu = 0.0;
        for (const std::size_t k : cluster) mu += vals[k];
        mu /= static_cast<double>(cluster.size());
        CVector y = yvecs[cluster[0]];
        for (int it = 0; it < 12; ++it) {
            ComplexSquareMatrix shifted = bmat;
            for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
            const Lu f = lu_factor(std::move(shifted), true);
            CVector w = lu_solve(f, y);
            const double nw = vec_norm(w);
            if (!(nw > 0.0) || !std::isfinite(nw)) break;
            for (auto& x : w) x /= nw;
            y = std::move(w);
            const CVector by = kernels::matvec(bmat, y);
            const cdouble mu_new = vec_dot(y, by);
            if (std::abs(mu_new - mu) <= 8.0 * kEps * (1.0 + std::abs(mu_new))) {
                mu = mu_new;
                break;
            }
            mu = mu_new;
        }
        ComplexSquareMatrix shifted = bmat;
        for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mu;
        const double rank_tol = 100.0 * static_cast<double>(n) * kEps * bnorm;
        std::vector<CVector> basis = null_space_impl(shifted, rank_tol);
        if (basis.size() > cluster.size()) basis.resize(cluster.size());
        if (basis.empty()) {
            // refinement missed; fall back to the best candidate vector
            std::size_t best = cluster[0];
            double bres = std::numeric_limits<double>::infinity();
            for (const std::size_t k : cluster) {
                CVector v = unbalance(yvecs[k]);
                const double r = raw_residual(v, vals[k]);
                if (r < bres) {
                    bres = r;
                    best = k;
                }
            }
            CVector v = unbalance(yvecs[best]);
            recs.push_back({vals[best], std::move(v), 1, static_cast<int>(cluster.size()), bres});
            continue;
        }
        const int geo = static_cast<int>(basis.size());
        std::vector<CVector> unbal;
        for (auto& y2 : basis) unbal.push_back(unbalance(y2));
        // re-orthonormalize in the original coordinates for a tidy output
        for (std::size_t a = 0; a < unbal.size(); ++a) {
            for (std::size_t b2 = 0; b2 < a; ++b2) {
                const cdouble c = vec_dot(unbal[b2], unbal[a]);
                for (std::size_t i = 0; i < n; ++i) unbal[a][i] -= c * unbal[b2][i];
            }
            vec_normalize(unbal[a]);
            fix_phase(unbal[a]);
        }
        for (auto& v : unbal) {
            const double r = raw_residual(v, mu);
            recs.push_back({mu, std::move(v), geo, static_cast<int>(cluster.size()), r});
        }
    }

    std::stable_sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        if (a.val.real() != b.val.real()) return a.val.real() < b.val.real();
        return a.val.imag() < b.val.imag();
    });

    for (auto& r : recs) {
        out.eigenvalues.push_back(r.val);
        out.eigenvectors.push_back(std::move(r.vec));
        out.geometric_multiplicities.push_back(r.geo);
        out.algebraic_multiplicities.push_back(r.alg);
        out.residuals.push_back(r.res);
    }
    (void)tol;
    return out;
}

}  // namespace ist
