#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ist/algebra.hpp"
#include "ist/bosonic.hpp"
#include "ist/kernels.hpp"
#include "ist/linalg.hpp"

using namespace ist;

namespace {

// Oracle for the two-mode sector reduction: build a (x) I and I (x) b on the
// full tensor space, form the generators there, and read off the sector block.
GeneratorTriple two_mode_tensor_oracle(int sector_diff, int per_mode_cutoff) {
    const int c = per_mode_cutoff;
    const std::size_t dim = static_cast<std::size_t>(c) * c;
    auto idx = [c](int na, int nb) { return static_cast<std::size_t>(na) * c + nb; };
    ComplexSquareMatrix a(dim), b(dim);
    for (int na = 1; na < c; ++na)
        for (int nb = 0; nb < c; ++nb) a(idx(na - 1, nb), idx(na, nb)) = std::sqrt(double(na));
    for (int na = 0; na < c; ++na)
        for (int nb = 1; nb < c; ++nb) b(idx(na, nb - 1), idx(na, nb)) = std::sqrt(double(nb));
    const ComplexSquareMatrix ad = adjoint(a), bd = adjoint(b);
    const ComplexSquareMatrix adbd = kernels::matmul(ad, bd);
    const ComplexSquareMatrix ab = kernels::matmul(a, b);
    const ComplexSquareMatrix k1 = 0.5 * (adbd + ab);
    const ComplexSquareMatrix k2 = cdouble(0.0, -0.5) * (adbd - ab);
    ComplexSquareMatrix k3(dim);
    for (int na = 0; na < c; ++na)
        for (int nb = 0; nb < c; ++nb) k3(idx(na, nb), idx(na, nb)) = 0.5 * (na + nb + 1.0);

    const int d = sector_diff >= 0 ? sector_diff : -sector_diff;
    const int sector_len = c - d;
    std::vector<std::size_t> sector;
    for (int n = 0; n < sector_len; ++n) sector.push_back(idx(n + d, n));
    auto restrict_to = [&](const ComplexSquareMatrix& m) {
        ComplexSquareMatrix r(sector.size());
        for (std::size_t i = 0; i < sector.size(); ++i)
            for (std::size_t j = 0; j < sector.size(); ++j) r(i, j) = m(sector[i], sector[j]);
        return r;
    };
    return GeneratorTriple{restrict_to(k1), restrict_to(k2), restrict_to(k3)};
}

ComplexSquareMatrix head(const ComplexSquareMatrix& m, std::size_t n) {
    ComplexSquareMatrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r(i, j) = m(i, j);
    return r;
}

}  // namespace

TEST_CASE("ladder action and commutator on the interior") {
    for (int cutoff : {16, 48}) {
        const LadderSet l = ladder_ops(cutoff);
        for (int n = 1; n < cutoff; ++n)
            CHECK(std::abs(l.a(n - 1, n) - cdouble(std::sqrt(double(n)), 0.0)) < 1e-15);
        const ComplexSquareMatrix comm = commutator(l.a, l.a_dag);
        for (int i = 0; i + 1 < cutoff; ++i)
            CHECK(std::abs(comm(i, i) - cdouble(1.0, 0.0)) < 5e-14);
        CHECK(frobenius_norm(l.a_dag - adjoint(l.a)) == 0.0);
    }
}

TEST_CASE("single-photon Schwinger sector is spin one half") {
    const GeneratorTriple g = schwinger_su2(1);
    const GeneratorTriple s = make_spin_observables(0.5);
    CHECK(frobenius_norm(g.g1 - s.g1) < 1e-15);
    CHECK(frobenius_norm(g.g2 - s.g2) < 1e-15);
    CHECK(frobenius_norm(g.g3 - s.g3) < 1e-15);
}

TEST_CASE("two-photon Schwinger sector matches spin one") {
    const GeneratorTriple g = schwinger_su2(2);
    const GeneratorTriple s = make_spin_observables(1.0);
    CHECK(frobenius_norm(g.g1 - s.g1) < 1e-14);
    CHECK(frobenius_norm(g.g2 - s.g2) < 1e-14);
    CHECK(frobenius_norm(g.g3 - s.g3) < 1e-14);
}

TEST_CASE("Schwinger equivalence holds entrywise up to N = 20") {
    for (int n = 1; n <= 20; ++n) {
        const GeneratorTriple g = schwinger_su2(n);
        const GeneratorTriple s = make_spin_observables(0.5 * n);
        CHECK(max_abs(g.g1 - s.g1) < 1e-12);
        CHECK(max_abs(g.g2 - s.g2) < 1e-12);
        CHECK(max_abs(g.g3 - s.g3) < 1e-12);
    }
}

TEST_CASE("Schwinger J3 eigenvalue is half the photon-number difference") {
    const GeneratorTriple g = schwinger_su2(5);
    // basis index i corresponds to |n_a, n_b> = |5-i, i>
    for (int i = 0; i <= 5; ++i)
        CHECK(std::abs(g.g3(i, i) - cdouble(0.5 * ((5.0 - i) - i), 0.0)) < 1e-15);
}

TEST_CASE("two-mode su(1,1) sector constants") {
    const GeneratorTriple g = su11_two_mode(0, 24);
    for (int n = 0; n < 24; ++n) CHECK(std::abs(g.g3(n, n) - cdouble(n + 0.5, 0.0)) < 1e-15);
    const GeneratorTriple h = su11_two_mode(3, 24);
    for (int n = 0; n < 24; ++n) CHECK(std::abs(h.g3(n, n) - cdouble(n + 2.0, 0.0)) < 1e-15);
}

TEST_CASE("two-mode sector reduction agrees with the tensor-space oracle") {
    for (int d : {0, 1, 2}) {
        const GeneratorTriple oracle = two_mode_tensor_oracle(d, 18);
        const GeneratorTriple direct = su11_two_mode(d, 16);
        const std::size_t n = 12;  // stay clear of both truncations
        CHECK(max_abs(head(oracle.g1, n) - head(direct.g1, n)) < 1e-13);
        CHECK(max_abs(head(oracle.g2, n) - head(direct.g2, n)) < 1e-13);
        CHECK(max_abs(head(oracle.g3, n) - head(direct.g3, n)) < 1e-13);
    }
}

TEST_CASE("single-mode K3 spectra per parity sector") {
    const GeneratorTriple e = su11_single_mode(Parity::Even, 32);
    for (std::size_t i = 0; i < e.g3.dim(); ++i)
        CHECK(std::abs(e.g3(i, i) - cdouble(i + 0.25, 0.0)) < 1e-14);
    const GeneratorTriple o = su11_single_mode(Parity::Odd, 32);
    for (std::size_t i = 0; i < o.g3.dim(); ++i)
        CHECK(std::abs(o.g3(i, i) - cdouble(i + 0.75, 0.0)) < 1e-14);
}

TEST_CASE("odd-sector Casimir is -3/16 on the interior") {
    const GeneratorTriple g = su11_single_mode(Parity::Odd, 64);
    const ComplexSquareMatrix cas = kernels::matmul(g.g3, g.g3) - kernels::matmul(g.g1, g.g1) -
                                    kernels::matmul(g.g2, g.g2);
    const AlgebraKind a = AlgebraKind::su11_single_mode(Parity::Odd, 64);
    const ComplexSquareMatrix ref =
        cdouble(-3.0 / 16.0) * ComplexSquareMatrix::identity(cas.dim());
    CHECK(frobenius_norm(project_interior(cas - ref, a.interior_mask())) < 1e-10);
}

TEST_CASE("phase shift yields a diagonal unitary with zero leakage") {
    const AlgebraKind space = AlgebraKind::su11_single_mode(Parity::Even, 64);
    OpticalElement el;
    el.kind = OpticalElement::Kind::PhaseShift;
    el.phi = 0.7;
    const OpticalResult r = optical_unitary(el, space);
    CHECK(r.leakage.tail_mass == 0.0);
    CHECK(r.leakage.cutoff_doubling_delta == 0.0);
    for (std::size_t i = 0; i < r.unitary.dim(); ++i)
        for (std::size_t j = 0; j < r.unitary.dim(); ++j)
            if (i != j) CHECK(std::abs(r.unitary(i, j)) == 0.0);
    CHECK(unitarity_defect(r.unitary) < 1e-13);
    // relative phase e^{i phi n} over even levels n = 0,2,4,...
    CHECK(std::abs(r.unitary(1, 1) - std::exp(cdouble(0.0, 0.7 * 2.0))) < 1e-14);
}

TEST_CASE("beam splitter on the single-photon sector matches the spin-1/2 exponential") {
    OpticalElement el;
    el.kind = OpticalElement::Kind::BeamSplitter;
    el.axis = 1;
    el.phi = 0.6;
    const OpticalResult r = optical_unitary(el, AlgebraKind::su2(0.5));
    ComplexSquareMatrix gen = make_spin_observables(0.5).g1;
    gen *= cdouble(0.0, 0.6);
    CHECK(frobenius_norm(r.unitary - mat_exp(gen)) < 1e-13);
    CHECK(r.leakage.cutoff_doubling_delta == 0.0);
}

TEST_CASE("parametric amplifier on the vacuum stays within the truncation budget") {
    const AlgebraKind space = AlgebraKind::su11_single_mode(Parity::Even, 64);
    OpticalElement el;
    el.kind = OpticalElement::Kind::Parametric;
    el.axis = 2;
    el.phi = 0.5;
    const OpticalResult r = optical_unitary(el, space);
    CHECK(unitarity_defect(r.unitary) < 1e-10 * static_cast<double>(r.unitary.dim()));
    CHECK(r.leakage.cutoff_doubling_delta <= 1e-8);
    CHECK(r.leakage.tail_mass <= 1e-8);
}

TEST_CASE("two-mode parametric amplifier within budget") {
    const AlgebraKind space = AlgebraKind::su11_two_mode(0, 48);
    OpticalElement el;
    el.kind = OpticalElement::Kind::Parametric;
    el.axis = 1;
    el.phi = 0.4;
    const OpticalResult r = optical_unitary(el, space);
    CHECK(unitarity_defect(r.unitary) < 1e-10 * static_cast<double>(r.unitary.dim()));
    CHECK(r.leakage.cutoff_doubling_delta <= 1e-8);
}

TEST_CASE("parametric budget violations and bad inputs throw") {
    OpticalElement el;
    el.kind = OpticalElement::Kind::Parametric;
    el.axis = 2;
    el.phi = 2.5;  // beyond the |phi| <= 2 precondition
    CHECK_THROWS_AS(optical_unitary(el, AlgebraKind::su11_single_mode(Parity::Even, 64)),
                    invalid_input);
    el.phi = 1.8;  // allowed, but a tiny cutoff cannot absorb it
    CHECK_THROWS_AS(optical_unitary(el, AlgebraKind::su11_single_mode(Parity::Even, 16)),
                    truncation_budget);
    el.phi = 0.3;
    CHECK_THROWS_AS(optical_unitary(el, AlgebraKind::su2(1.0)), invalid_input);
    OpticalElement bs;
    bs.kind = OpticalElement::Kind::BeamSplitter;
    bs.phi = 0.3;
    CHECK_THROWS_AS(optical_unitary(bs, AlgebraKind::su11_two_mode(0, 32)), invalid_input);
}

TEST_CASE("every optical unitary is unitary to tolerance") {
    for (double phi : {0.2, 0.9}) {
        OpticalElement el;
        el.kind = OpticalElement::Kind::BeamSplitter;
        el.axis = 2;
        el.phi = phi;
        const OpticalResult r = optical_unitary(el, AlgebraKind::su2(3.0));
        CHECK(unitarity_defect(r.unitary) < 1e-10 * static_cast<double>(r.unitary.dim()));
    }
}
