#include "ist/intelligent.hpp"

#include <algorithm>
#include <cmath>

#include "ist/kernels.hpp"
#include "ist/linalg.hpp"

namespace ist {

std::vector<IntelligentState> solve_intelligent(const ObservablePair& pair, cdouble lambda,
                                                const TolerancePolicy& tol,
                                                double leakage_threshold) {
    const std::size_t n = pair.A.dim();
    ComplexSquareMatrix m(n);
    const cdouble il = cdouble(0.0, 1.0) * lambda;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = pair.A(r, c) + il * pair.B(r, c);

    const EigenSystem es = eig(m, tol);
    std::vector<IntelligentState> states;
    states.reserve(es.eigenvalues.size());
    for (std::size_t k = 0; k < es.eigenvalues.size(); ++k) {
        IntelligentState st;
        st.psi = es.eigenvectors[k];
        st.lambda = lambda;
        st.beta = es.eigenvalues[k];
        st.residual = es.residuals[k];
        st.tail_mass = tail_mass(st.psi, pair.algebra);
        const bool defect = es.algebraic_multiplicities[k] > es.geometric_multiplicities[k];
        if (defect)
            st.status = StateStatus::BoundaryDefective;
        else if (pair.algebra.is_truncated() && st.tail_mass > leakage_threshold)
            st.status = StateStatus::TruncationUnsafe;
        else if (st.residual > tol.rtol)
            st.status = pair.algebra.is_truncated() ? StateStatus::TruncationUnsafe
                                                    : StateStatus::BoundaryDefective;
        states.push_back(std::move(st));
    }
    std::stable_sort(states.begin(), states.end(),
                     [](const IntelligentState& a, const IntelligentState& b) {
                         if (a.beta.real() != b.beta.real()) return a.beta.real() < b.beta.real();
                         return a.beta.imag() < b.beta.imag();
                     });
    return states;
}

MomentSummary moments(const ObservablePair& pair, const CVector& psi, bool enforce_leakage,
                      double leakage_threshold) {
    if (psi.size() != pair.A.dim()) throw invalid_input("moments: state dimension mismatch");
    const double nrm = vec_norm(psi);
    if (std::abs(nrm - 1.0) > 1e-6) throw invalid_input("moments: state is not unit-norm");
    if (enforce_leakage && pair.algebra.is_truncated() &&
        tail_mass(psi, pair.algebra) > leakage_threshold)
        throw truncation_unsafe("moments: state leaks beyond the truncation-safe region");

    const CVector av = kernels::matvec(pair.A, psi);
    const CVector bv = kernels::matvec(pair.B, psi);

    MomentSummary m;
    m.mean_a = vec_dot(psi, av).real();
    m.mean_b = vec_dot(psi, bv).real();
    double a2 = 0.0, b2 = 0.0;
    for (const auto& x : av) a2 += std::norm(x);
    for (const auto& x : bv) b2 += std::norm(x);
    // variances are nonnegative; clear the rounding dust below zero
    m.var_a = std::max(0.0, a2 - m.mean_a * m.mean_a);
    m.var_b = std::max(0.0, b2 - m.mean_b * m.mean_b);
    const cdouble ab = vec_dot(av, bv);  // <psi| A B |psi>
    m.cov_s = ab.real() - m.mean_a * m.mean_b;
    m.comm_expect = cdouble(0.0, 2.0 * ab.imag());
    m.det_c = m.var_a * m.var_b - m.cov_s * m.cov_s;
    const double comm_sq = std::norm(m.comm_expect);
    m.v_crit = std::sqrt(0.25 * comm_sq + m.cov_s * m.cov_s);
    m.hur_residual = m.var_a * m.var_b - 0.25 * comm_sq;
    m.srr_residual = m.hur_residual - m.cov_s * m.cov_s;
    return m;
}

SqueezeClass classify(const MomentSummary& m, cdouble lambda, const TolerancePolicy& tol) {
    const double al = std::abs(lambda);
    if (std::abs(al - 1.0) <= tol.atol) return SqueezeClass::Coherent;
    if (al < 1.0 && m.var_a < m.v_crit - tol.atol) return SqueezeClass::ASqueezed;
    if (al > 1.0 && m.var_b < m.v_crit - tol.atol) return SqueezeClass::BSqueezed;
    return SqueezeClass::UnsqueezedIntelligent;
}

const char* to_string(StateStatus s) {
    switch (s) {
        case StateStatus::Genuine: return "genuine";
        case StateStatus::BoundaryDefective: return "boundary-defective";
        case StateStatus::TruncationUnsafe: return "truncation-unsafe";
    }
    return "?";
}

const char* to_string(SqueezeClass c) {
    switch (c) {
        case SqueezeClass::Coherent: return "coherent";
        case SqueezeClass::ASqueezed: return "A-squeezed";
        case SqueezeClass::BSqueezed: return "B-squeezed";
        case SqueezeClass::UnsqueezedIntelligent: return "unsqueezed-intelligent";
    }
    return "?";
}

}  // namespace ist
