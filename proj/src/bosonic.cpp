#include "ist/bosonic.hpp"

#include <cmath>

#include "ist/kernels.hpp"
#include "ist/linalg.hpp"

namespace ist {

namespace {

ComplexSquareMatrix submatrix(const ComplexSquareMatrix& m, const std::vector<std::size_t>& idx) {
    ComplexSquareMatrix r(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = m(idx[i], idx[j]);
    return r;
}

std::vector<std::size_t> parity_indices(Parity parity, int cutoff) {
    std::vector<std::size_t> idx;
    for (int n = (parity == Parity::Even) ? 0 : 1; n < cutoff; n += 2)
        idx.push_back(static_cast<std::size_t>(n));
    return idx;
}

struct ProbeStats {
    double mean[3] = {0, 0, 0};
    double var[3] = {0, 0, 0};
};

ProbeStats generator_stats(const GeneratorTriple& g, const CVector& psi) {
    ProbeStats st;
    const ComplexSquareMatrix* ms[3] = {&g.g1, &g.g2, &g.g3};
    for (int k = 0; k < 3; ++k) {
        const CVector w = kernels::matvec(*ms[k], psi);
        const double mean = vec_dot(psi, w).real();
        double nw = 0.0;
        for (const auto& x : w) nw += std::norm(x);
        st.mean[k] = mean;
        st.var[k] = nw - mean * mean;
    }
    return st;
}

GeneratorTriple space_generators(const AlgebraKind& space) {
    switch (space.family) {
        case AlgebraKind::Family::Su2Spin:
            return schwinger_su2(static_cast<int>(std::llround(2.0 * space.spin_j)));
        case AlgebraKind::Family::Su11TwoMode:
            return su11_two_mode(space.sector_diff, space.cutoff);
        case AlgebraKind::Family::Su11SingleMode:
            return su11_single_mode(space.parity, space.cutoff);
    }
    throw invalid_input("space_generators: unknown family");
}

// occupation of the requested mode at sector index i
double mode_occupation(const AlgebraKind& space, int mode, std::size_t i) {
    switch (space.family) {
        case AlgebraKind::Family::Su2Spin: {
            const int n_total = static_cast<int>(std::llround(2.0 * space.spin_j));
            const double na = static_cast<double>(n_total) - static_cast<double>(i);
            return mode == 0 ? na : static_cast<double>(n_total) - na;
        }
        case AlgebraKind::Family::Su11TwoMode: {
            const int da = space.sector_diff >= 0 ? space.sector_diff : 0;
            const int db = space.sector_diff < 0 ? -space.sector_diff : 0;
            return static_cast<double>(i) + static_cast<double>(mode == 0 ? da : db);
        }
        case AlgebraKind::Family::Su11SingleMode: {
            if (mode != 0) throw invalid_input("phase_shift: single-mode space has one mode");
            return 2.0 * static_cast<double>(i) + (space.parity == Parity::Odd ? 1.0 : 0.0);
        }
    }
    return 0.0;
}

}  // namespace

LadderSet ladder_ops(int cutoff) {
    if (cutoff < 2) throw invalid_input("ladder_ops: cutoff must be >= 2");
    ComplexSquareMatrix a(static_cast<std::size_t>(cutoff));
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return LadderSet{a, adjoint(a)};
}

GeneratorTriple schwinger_su2(int n_total) {
    if (n_total < 1) throw invalid_input("schwinger_su2: need at least one photon");
    const std::size_t dim = static_cast<std::size_t>(n_total) + 1;
    // basis |n_a, N - n_a> ordered by descending n_a, matching the
    // descending-m spin basis through m = n_a - N/2
    ComplexSquareMatrix jp(dim);  // a^dag b
    for (std::size_t i = 1; i < dim; ++i) {
        const double na = static_cast<double>(n_total) - static_cast<double>(i);
        const double nb = static_cast<double>(i);
        jp(i - 1, i) = std::sqrt((na + 1.0) * nb);
    }
    const ComplexSquareMatrix jm = adjoint(jp);
    GeneratorTriple t{ComplexSquareMatrix(dim), ComplexSquareMatrix(dim), ComplexSquareMatrix(dim)};
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            t.g1(r, c) = 0.5 * (jp(r, c) + jm(r, c));
            t.g2(r, c) = cdouble(0.0, -0.5) * (jp(r, c) - jm(r, c));
        }
    for (std::size_t i = 0; i < dim; ++i) {
        const double na = static_cast<double>(n_total) - static_cast<double>(i);
        t.g3(i, i) = 0.5 * (na - (static_cast<double>(n_total) - na));
    }
    return t;
}

GeneratorTriple su11_two_mode(int sector_diff, int cutoff) {
    if (cutoff < 16) throw invalid_input("su11_two_mode: cutoff must be >= 16");
    const std::size_t dim = static_cast<std::size_t>(cutoff);
    const int d = sector_diff >= 0 ? sector_diff : -sector_diff;
    // basis |n + d, n>, n = 0..cutoff-1; K+ = a^dag b^dag
    ComplexSquareMatrix kp(dim);
    for (std::size_t n = 0; n + 1 < dim; ++n)
        kp(n + 1, n) = std::sqrt((static_cast<double>(n) + 1.0) *
                                 (static_cast<double>(n) + static_cast<double>(d) + 1.0));
    const ComplexSquareMatrix km = adjoint(kp);
    GeneratorTriple t{ComplexSquareMatrix(dim), ComplexSquareMatrix(dim), ComplexSquareMatrix(dim)};
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            t.g1(r, c) = 0.5 * (kp(r, c) + km(r, c));
            t.g2(r, c) = cdouble(0.0, -0.5) * (kp(r, c) - km(r, c));
        }
    for (std::size_t n = 0; n < dim; ++n)
        t.g3(n, n) = static_cast<double>(n) + 0.5 * (static_cast<double>(d) + 1.0);
    return t;
}

GeneratorTriple su11_single_mode(Parity parity, int cutoff) {
    if (cutoff < 16) throw invalid_input("su11_single_mode: cutoff must be >= 16");
    const LadderSet l = ladder_ops(cutoff);
    const ComplexSquareMatrix a2 = kernels::matmul(l.a, l.a);
    const ComplexSquareMatrix ad2 = adjoint(a2);
    const ComplexSquareMatrix num = kernels::matmul(l.a_dag, l.a);
    const std::size_t n = static_cast<std::size_t>(cutoff);
    ComplexSquareMatrix k1(n), k2(n), k3(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            k1(r, c) = 0.25 * (ad2(r, c) + a2(r, c));
            k2(r, c) = cdouble(0.0, -0.25) * (ad2(r, c) - a2(r, c));
            k3(r, c) = 0.25 * (2.0 * num(r, c) + (r == c ? 1.0 : 0.0));
        }
    const auto idx = parity_indices(parity, cutoff);
    return GeneratorTriple{submatrix(k1, idx), submatrix(k2, idx), submatrix(k3, idx)};
}

OpticalResult optical_unitary(const OpticalElement& element, const AlgebraKind& space,
                              std::size_t probe_index) {
    const bool su2 = space.family == AlgebraKind::Family::Su2Spin;
    OpticalResult out;

    if (element.kind == OpticalElement::Kind::PhaseShift) {
        const std::size_t dim = space.dim();
        if (probe_index >= dim) throw invalid_input("optical_unitary: probe outside the space");
        ComplexSquareMatrix u(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double occ = mode_occupation(space, element.mode, i);
            u(i, i) = std::exp(cdouble(0.0, element.phi * occ));
        }
        out.unitary = std::move(u);
        out.leakage = LeakageReport{0.0, 0.0};  // number-diagonal generator
        return out;
    }

    if (element.kind == OpticalElement::Kind::BeamSplitter && !su2)
        throw invalid_input("optical_unitary: beam splitter acts on the two-mode su(2) sector");
    if (element.kind == OpticalElement::Kind::Parametric) {
        if (su2) throw invalid_input("optical_unitary: parametric elements act on su(1,1) spaces");
        if (std::abs(element.phi) > 2.0)
            throw invalid_input("optical_unitary: |phi| <= 2 for parametric elements");
    }
    if (element.axis != 1 && element.axis != 2)
        throw invalid_input("optical_unitary: generator axis must be 1 or 2");

    auto build = [&](const AlgebraKind& sp) {
        const GeneratorTriple g = space_generators(sp);
        ComplexSquareMatrix gen = (element.axis == 1) ? g.g1 : g.g2;
        gen *= cdouble(0.0, element.phi);
        return std::pair<ComplexSquareMatrix, GeneratorTriple>(mat_exp(gen), g);
    };

    auto [u, gtrip] = build(space);
    if (probe_index >= u.dim()) throw invalid_input("optical_unitary: probe outside the space");
    const CVector psi = kernels::matvec(u, basis_vector(u.dim(), probe_index));
    out.leakage.tail_mass = tail_mass(psi, space);

    if (su2) {
        out.leakage.cutoff_doubling_delta = 0.0;  // exact sector, nothing truncated
        out.unitary = std::move(u);
        return out;
    }

    AlgebraKind doubled = space;
    doubled.cutoff = 2 * space.cutoff;
    auto [u2, gtrip2] = build(doubled);
    const CVector psi2 = kernels::matvec(u2, basis_vector(u2.dim(), probe_index));
    const ProbeStats s1 = generator_stats(gtrip, psi);
    const ProbeStats s2 = generator_stats(gtrip2, psi2);
    double delta = 0.0;
    for (int k = 0; k < 3; ++k) {
        delta = std::max(delta, std::abs(s1.mean[k] - s2.mean[k]));
        delta = std::max(delta, std::abs(s1.var[k] - s2.var[k]));
    }
    out.leakage.cutoff_doubling_delta = delta;
    out.unitary = std::move(u);
    if (delta > 1e-6)
        throw truncation_budget(
            "optical_unitary: observables moved by " + std::to_string(delta) +
            " under cutoff doubling; raise the cutoff for this amplification strength");
    return out;
}

}  // namespace ist
