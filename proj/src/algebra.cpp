#include "ist/algebra.hpp"

#include <cmath>

#include "ist/bosonic.hpp"
#include "ist/kernels.hpp"
#include "ist/linalg.hpp"

namespace ist {

namespace {

bool is_half_integer(double x) {
    const double two = 2.0 * x;
    return std::abs(two - std::round(two)) <= 1e-9;
}

constexpr int kInteriorMargin = 5;

}  // namespace

AlgebraKind AlgebraKind::su2(double j) {
    if (!is_half_integer(j) || j < 0.5)
        throw invalid_input("AlgebraKind::su2: J must be a half-integer >= 1/2");
    AlgebraKind k;
    k.family = Family::Su2Spin;
    k.spin_j = j;
    return k;
}

AlgebraKind AlgebraKind::su11_two_mode(int sector_diff, int cutoff) {
    if (cutoff < 4) throw invalid_input("AlgebraKind: cutoff must be >= 4");
    AlgebraKind k;
    k.family = Family::Su11TwoMode;
    k.sector_diff = sector_diff;
    k.cutoff = cutoff;
    return k;
}

AlgebraKind AlgebraKind::su11_single_mode(Parity parity, int cutoff) {
    if (cutoff < 4) throw invalid_input("AlgebraKind: cutoff must be >= 4");
    AlgebraKind k;
    k.family = Family::Su11SingleMode;
    k.parity = parity;
    k.cutoff = cutoff;
    return k;
}

std::size_t AlgebraKind::dim() const {
    switch (family) {
        case Family::Su2Spin:
            return static_cast<std::size_t>(std::llround(2.0 * spin_j + 1.0));
        case Family::Su11TwoMode:
            return static_cast<std::size_t>(cutoff);
        case Family::Su11SingleMode: {
            const int d = (parity == Parity::Even) ? (cutoff + 1) / 2 : cutoff / 2;
            return static_cast<std::size_t>(d);
        }
    }
    return 0;
}

std::vector<int> AlgebraKind::interior_mask() const {
    const std::size_t n = dim();
    std::vector<int> mask(n, 1);
    if (!is_truncated()) return mask;
    for (std::size_t i = n >= kInteriorMargin ? n - kInteriorMargin : 0; i < n; ++i) mask[i] = 0;
    return mask;
}

GeneratorTriple make_spin_observables(double j) {
    if (!is_half_integer(j) || j < 0.5)
        throw invalid_input("make_spin_observables: J must be a half-integer >= 1/2");
    const std::size_t n = static_cast<std::size_t>(std::llround(2.0 * j + 1.0));
    ComplexSquareMatrix jp(n);  // raising operator in the descending-m basis
    for (std::size_t i = 1; i < n; ++i) {
        const double m = j - static_cast<double>(i);
        jp(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
    const ComplexSquareMatrix jm = adjoint(jp);
    GeneratorTriple t{ComplexSquareMatrix(n), ComplexSquareMatrix(n), ComplexSquareMatrix(n)};
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            t.g1(r, c) = 0.5 * (jp(r, c) + jm(r, c));
            t.g2(r, c) = cdouble(0.0, -0.5) * (jp(r, c) - jm(r, c));
        }
    for (std::size_t i = 0; i < n; ++i) t.g3(i, i) = j - static_cast<double>(i);
    return t;
}

ObservablePair make_pair(const AlgebraKind& algebra, PairSelector which) {
    const bool su2 = algebra.family == AlgebraKind::Family::Su2Spin;
    const bool want_su2 =
        which == PairSelector::J1J2 || which == PairSelector::J2J3 || which == PairSelector::J3J1;
    if (su2 != want_su2) throw invalid_input("make_pair: selector does not match the algebra");

    GeneratorTriple g;
    if (su2) {
        g = make_spin_observables(algebra.spin_j);
    } else if (algebra.family == AlgebraKind::Family::Su11TwoMode) {
        g = su11_two_mode(algebra.sector_diff, algebra.cutoff);
    } else {
        g = su11_single_mode(algebra.parity, algebra.cutoff);
    }

    ObservablePair p;
    p.algebra = algebra;
    p.selector = which;
    p.interior = algebra.interior_mask();
    switch (which) {
        case PairSelector::J1J2:
            p.A = g.g1; p.B = g.g2; p.G = g.g3;
            p.kind = RotationKind::Circular;
            break;
        case PairSelector::J2J3:
            p.A = g.g2; p.B = g.g3; p.G = g.g1;
            p.kind = RotationKind::Circular;
            break;
        case PairSelector::J3J1:
            p.A = g.g3; p.B = g.g1; p.G = g.g2;
            p.kind = RotationKind::Circular;
            break;
        case PairSelector::K1K2:
            p.A = g.g1; p.B = g.g2; p.G = g.g3;
            p.kind = RotationKind::Circular;
            break;
        case PairSelector::K1K3:
            p.A = g.g1; p.B = g.g3; p.G = g.g2;
            p.kind = RotationKind::Hyperbolic;
            break;
        case PairSelector::K2K3:
            // exp(-i phi K1) produces the canonical hyperbolic form for
            // (K2, K3); store the generator with that orientation.
            p.A = g.g2; p.B = g.g3; p.G = cdouble(-1.0) * g.g1;
            p.kind = RotationKind::Hyperbolic;
            break;
    }
    return p;
}

ComplexSquareMatrix commutator(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b) {
    return kernels::matmul(a, b) - kernels::matmul(b, a);
}

ComplexSquareMatrix project_interior(const ComplexSquareMatrix& m, const std::vector<int>& mask) {
    if (mask.size() != m.dim()) throw invalid_input("project_interior: mask size mismatch");
    ComplexSquareMatrix r = m;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            if (!mask[i] || !mask[j]) r(i, j) = 0.0;
    return r;
}

namespace {

double rotation_deviation(const ObservablePair& p, double phi, const std::vector<int>& mask) {
    ComplexSquareMatrix gen = p.G;
    gen *= cdouble(0.0, phi);
    const ComplexSquareMatrix u = mat_exp(gen);
    const ComplexSquareMatrix a_rot = kernels::conjugate_by(u, p.A);
    const ComplexSquareMatrix b_rot = kernels::conjugate_by(u, p.B);
    ComplexSquareMatrix a_ref(p.A.dim()), b_ref(p.A.dim());
    if (p.kind == RotationKind::Circular) {
        const double c = std::cos(phi), s = std::sin(phi);
        a_ref = cdouble(c) * p.A - cdouble(s) * p.B;
        b_ref = cdouble(s) * p.A + cdouble(c) * p.B;
    } else {
        const double ch = std::cosh(phi), sh = std::sinh(phi);
        a_ref = cdouble(ch) * p.A - cdouble(sh) * p.B;
        b_ref = cdouble(-sh) * p.A + cdouble(ch) * p.B;
    }
    const double da = frobenius_norm(project_interior(a_rot - a_ref, mask));
    const double db = frobenius_norm(project_interior(b_rot - b_ref, mask));
    return std::max(da, db);
}

}  // namespace

double check_rotation(const ObservablePair& pair, double phi) {
    return rotation_deviation(pair, phi, pair.interior);
}

double check_rotation_converged(const AlgebraKind& algebra, PairSelector which, double phi,
                                int cutoff_factor) {
    if (cutoff_factor < 2) throw invalid_input("check_rotation_converged: factor must be >= 2");
    if (!algebra.is_truncated()) return check_rotation(make_pair(algebra, which), phi);
    AlgebraKind doubled = algebra;
    doubled.cutoff = cutoff_factor * algebra.cutoff;
    const ObservablePair big = make_pair(doubled, which);
    // the original interior window embeds as a prefix of the doubled sector
    std::vector<int> window(big.A.dim(), 0);
    const std::size_t small_dim = algebra.dim();
    for (std::size_t i = 0; i + kInteriorMargin < small_dim; ++i) window[i] = 1;
    return rotation_deviation(big, phi, window);
}

double tail_mass(const CVector& v, const AlgebraKind& algebra) {
    if (!algebra.is_truncated()) return 0.0;
    const std::size_t n = v.size();
    double s = 0.0;
    for (std::size_t i = n >= kInteriorMargin ? n - kInteriorMargin : 0; i < n; ++i)
        s += std::norm(v[i]);
    return s;
}

const char* to_string(PairSelector s) {
    switch (s) {
        case PairSelector::J1J2: return "J1J2";
        case PairSelector::J2J3: return "J2J3";
        case PairSelector::J3J1: return "J3J1";
        case PairSelector::K1K2: return "K1K2";
        case PairSelector::K1K3: return "K1K3";
        case PairSelector::K2K3: return "K2K3";
    }
    return "?";
}

const char* to_string(RotationKind k) {
    return k == RotationKind::Circular ? "circular" : "hyperbolic";
}

}  // namespace ist
