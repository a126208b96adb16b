#include "ist/equivalence.hpp"

#include <cmath>
#include <limits>

#include "ist/kernels.hpp"
#include "ist/linalg.hpp"

namespace ist {

namespace {

constexpr double kPi = 3.14159265358979323846;

cdouble forward_lambda_only(RotationKind kind, double lambda, double phi) {
    if (kind == RotationKind::Circular) {
        const double c = std::cos(phi), s = std::sin(phi);
        return (cdouble(lambda * c, s)) / (cdouble(c, lambda * s));
    }
    const double ch = std::cosh(phi), sh = std::sinh(phi);
    return (cdouble(lambda * ch, sh)) / (cdouble(ch, -lambda * sh));
}

}  // namespace

ForwardResult forward_map(RotationKind kind, double lambda, double phi, cdouble beta,
                          const TolerancePolicy& tol) {
    cdouble den;
    cdouble num;
    if (kind == RotationKind::Circular) {
        const double c = std::cos(phi), s = std::sin(phi);
        num = cdouble(lambda * c, s);
        den = cdouble(c, lambda * s);
    } else {
        const double ch = std::cosh(phi), sh = std::sinh(phi);
        num = cdouble(lambda * ch, sh);
        den = cdouble(ch, -lambda * sh);
    }
    if (std::abs(den) <= tol.atol) throw singular_map("forward_map: vanishing denominator");
    return ForwardResult{num / den, beta / den};
}

InverseResult inverse_map(RotationKind kind, cdouble Lambda, const TolerancePolicy& tol) {
    const double x = Lambda.real(), y = Lambda.imag();
    InverseResult out;

    if (kind == RotationKind::Circular) {
        if (y == 0.0) {
            out.lambda = x;
            out.phi = 0.0;
            out.roundtrip_err = 0.0;
            return out;
        }
        const double phi1 = 0.5 * std::atan2(2.0 * y, 1.0 - x * x - y * y);
        const double phi2 = phi1 > 0.0 ? phi1 - 0.5 * kPi : phi1 + 0.5 * kPi;
        // tolerant test: the branch boundary itself wobbles at rounding level
        const auto in_principal_branch = [](double p) {
            return p > -0.25 * kPi - 1e-9 && p <= 0.25 * kPi + 1e-9;
        };

        struct Candidate {
            double lambda = 0, phi = 0, err = std::numeric_limits<double>::infinity();
            bool valid = false;
        };
        auto eval = [&](double phi) {
            Candidate c;
            c.phi = phi;
            const double t = std::tan(phi);
            const double den = 1.0 + y * t;
            if (std::abs(den) <= tol.atol) {
                if (std::abs(x) <= tol.atol) {
                    c.lambda = 0.0;  // removable: Lambda_x = 0 only
                } else {
                    return c;
                }
            } else {
                c.lambda = x / den;
            }
            c.err = std::abs(forward_lambda_only(kind, c.lambda, phi) - Lambda);
            c.valid = true;
            return c;
        };
        const Candidate c1 = eval(phi1);
        const Candidate c2 = eval(phi2);
        // Both quadrants can be valid preimages; take the principal branch only
        // when it closes as well as the other one, otherwise closure wins
        // (near the imaginary axis the in-branch preimage has a huge,
        // ill-determined lambda).
        Candidate chosen;
        const bool tie = c1.valid && c2.valid && c1.err < 1e-13 && c2.err < 1e-13;
        if (tie)
            chosen = (in_principal_branch(c1.phi) || !in_principal_branch(c2.phi)) ? c1 : c2;
        else if (!c2.valid || (c1.valid && c1.err <= c2.err))
            chosen = c1;
        else
            chosen = c2;
        if (!chosen.valid) throw singular_map("inverse_map: no finite candidate closes");
        out.lambda = chosen.lambda;
        out.phi = chosen.phi;
        out.roundtrip_err = chosen.err;
        out.branch_fallback = !in_principal_branch(chosen.phi);
        return out;
    }

    // hyperbolic
    if (std::abs(Lambda - cdouble(0.0, 1.0)) <= tol.atol ||
        std::abs(Lambda + cdouble(0.0, 1.0)) <= tol.atol)
        throw boundary_orbit("inverse_map: tanh(2 phi) = +-1 has no finite solution at Lambda = +-i");

    const double s_sum = 1.0 + x * x + y * y;
    const double h = 2.0 * y / s_sum;  // |h| < 1 away from +-i
    const double th = h / (1.0 + std::sqrt((1.0 - h) * (1.0 + h)));
    const double phi = std::atanh(th);

    // den = 1 - y*th computed without cancellation:
    //   a = 1 - y^2 + x^2,  R = sqrt(a^2 + 4 x^2 y^2),  den = (a + R)/(S + R)
    const double a = 1.0 - y * y + x * x;
    const double r = std::sqrt(a * a + 4.0 * x * x * y * y);
    double lambda;
    if (x == 0.0 && a <= 0.0)
        throw boundary_orbit(
            "inverse_map: no real squeezing parameter exists on the ray Lambda_x = 0, |Lambda_y| >= 1");
    if (a >= 0.0) {
        const double den = (a + r) / (s_sum + r);
        lambda = x / den;
    } else {
        // a + R = 4 x^2 y^2 / (R - a); fold the x into the quotient
        lambda = (s_sum + r) * (r - a) / (4.0 * x * y * y);
    }
    out.lambda = lambda;
    out.phi = phi;
    out.roundtrip_err = std::abs(forward_lambda_only(kind, lambda, phi) - Lambda);
    return out;
}

TransportResult transport(const ObservablePair& pair, cdouble Lambda, const TolerancePolicy& tol,
                          double leakage_threshold) {
    TransportResult out;
    const InverseResult inv = inverse_map(pair.kind, Lambda, tol);
    out.ois = solve_intelligent(pair, cdouble(inv.lambda, 0.0), tol, leakage_threshold);

    ComplexSquareMatrix gen = pair.G;
    gen *= cdouble(0.0, inv.phi);
    const ComplexSquareMatrix u = mat_exp(gen, tol);

    const std::size_t n = pair.A.dim();
    ComplexSquareMatrix m_gis(n);
    const cdouble il = cdouble(0.0, 1.0) * Lambda;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m_gis(r, c) = pair.A(r, c) + il * pair.B(r, c);
    const double m_scale = std::max(1.0, op_norm_est(m_gis));

    // A hyperbolic pseudo-rotation is an amplifier: it stretches Fock-space
    // support by about e^{2|phi|}. The transported state is only
    // truncation-safe when the OIS fits inside the interior shrunk by that
    // factor, which the plain top-5-level tail test cannot see.
    std::size_t safe_extent = n;
    if (pair.algebra.is_truncated() && pair.kind == RotationKind::Hyperbolic) {
        const double interior = static_cast<double>(n >= 5 ? n - 5 : 0);
        safe_extent = static_cast<std::size_t>(interior * std::exp(-2.0 * std::abs(inv.phi)));
    }

    for (const IntelligentState& phi_state : out.ois) {
        const ForwardResult fw =
            forward_map(pair.kind, inv.lambda, inv.phi, phi_state.beta, tol);
        CVector psi = kernels::matvec(u, phi_state.psi);
        vec_normalize(psi);
        fix_phase(psi);

        double ois_overflow = 0.0;
        for (std::size_t i = safe_extent; i < n; ++i) ois_overflow += std::norm(phi_state.psi[i]);

        CVector w = kernels::matvec(m_gis, psi);
        for (std::size_t i = 0; i < n; ++i) w[i] -= fw.beta_prime * psi[i];
        const double raw = vec_norm(w);

        IntelligentState gis;
        gis.psi = psi;
        gis.lambda = Lambda;
        gis.beta = fw.beta_prime;
        gis.residual = raw / m_scale;
        gis.tail_mass = tail_mass(psi, pair.algebra);
        gis.status = phi_state.status;
        if (gis.status == StateStatus::Genuine && pair.algebra.is_truncated() &&
            (gis.tail_mass > leakage_threshold || ois_overflow > leakage_threshold))
            gis.status = StateStatus::TruncationUnsafe;

        EquivalenceRecord rec;
        rec.Lambda = Lambda;
        rec.lambda = inv.lambda;
        rec.phi = inv.phi;
        rec.beta = phi_state.beta;
        rec.beta_prime = fw.beta_prime;
        rec.kind = pair.kind;
        rec.roundtrip_err = inv.roundtrip_err;
        rec.gis_residual = raw;
        rec.branch_fallback = inv.branch_fallback;
        rec.status = gis.status;

        out.gis.push_back(std::move(gis));
        out.records.push_back(rec);
    }
    return out;
}

CovarianceAngle covariance_angle(RotationKind kind, const MomentSummary& m,
                                 const TolerancePolicy& tol) {
    CovarianceAngle out;
    if (kind == RotationKind::Circular) {
        const double dv = m.var_a - m.var_b;
        if (std::abs(m.cov_s) <= tol.atol && std::abs(dv) <= tol.atol) {
            out.phi = 0.0;  // angle arbitrary for an isotropic state
            out.predicted_cov_after = m.cov_s;
            return out;
        }
        double phi = 0.5 * std::atan2(-2.0 * m.cov_s, dv);
        if (phi > 0.25 * kPi) phi -= 0.5 * kPi;  // the zero set is pi/2-periodic
        if (phi <= -0.25 * kPi) phi += 0.5 * kPi;
        out.phi = phi;
        out.predicted_cov_after = predict_rotated_cov(kind, m, phi);
        return out;
    }
    const double dsum = m.var_a + m.var_b;
    if (dsum <= 0.0) throw degenerate_state("covariance_angle: vanishing total variance");
    const double h = 2.0 * m.cov_s / dsum;
    if (std::abs(h) >= 1.0 - tol.atol)
        throw degenerate_state("covariance_angle: |tanh(2 phi)| at the degenerate boundary");
    const double th = h / (1.0 + std::sqrt((1.0 - h) * (1.0 + h)));
    out.phi = std::atanh(th);
    out.predicted_cov_after = predict_rotated_cov(kind, m, out.phi);
    return out;
}

double predict_rotated_cov(RotationKind kind, const MomentSummary& m, double phi) {
    if (kind == RotationKind::Circular)
        return 0.5 * std::sin(2.0 * phi) * (m.var_a - m.var_b) + std::cos(2.0 * phi) * m.cov_s;
    return -0.5 * std::sinh(2.0 * phi) * (m.var_a + m.var_b) + std::cosh(2.0 * phi) * m.cov_s;
}

CVector puri_state(double j, double m, double phi) {
    const double two_j = 2.0 * j, two_m = 2.0 * m;
    if (std::abs(two_j - std::round(two_j)) > 1e-9 || std::abs(two_m - std::round(two_m)) > 1e-9 ||
        std::abs(m) > j + 1e-9 || (std::llround(two_j) - std::llround(two_m)) % 2 != 0)
        throw invalid_input("puri_state: need half-integers with |m| <= J and J - m integral");
    const GeneratorTriple g = make_spin_observables(j);
    const std::size_t idx = static_cast<std::size_t>(std::llround(j - m));

    ComplexSquareMatrix half_turn = g.g2;
    half_turn *= cdouble(0.0, -0.5 * kPi);
    CVector v = kernels::matvec(mat_exp(half_turn), basis_vector(g.g2.dim(), idx));

    ComplexSquareMatrix twist = g.g3;
    twist *= cdouble(0.0, phi);
    CVector psi = kernels::matvec(mat_exp(twist), v);
    vec_normalize(psi);
    fix_phase(psi);
    return psi;
}

}  // namespace ist
