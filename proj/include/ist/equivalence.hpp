#pragma once

#include <vector>

#include "ist/algebra.hpp"
#include "ist/intelligent.hpp"
#include "ist/types.hpp"

namespace ist {

/// Matched parameter tuple for one OIS branch transported to a GIS.
struct EquivalenceRecord {
    cdouble Lambda;
    double lambda = 0;
    double phi = 0;
    cdouble beta;        // OIS eigenvalue
    cdouble beta_prime;  // GIS eigenvalue
    RotationKind kind = RotationKind::Circular;
    double roundtrip_err = 0;
    double gis_residual = 0;  // ||(A + i Lambda B) psi - beta' psi||
    bool branch_fallback = false;
    StateStatus status = StateStatus::Genuine;
};

struct ForwardResult {
    cdouble Lambda;
    cdouble beta_prime;
};

/// (lambda, phi, beta) -> (Lambda, beta'). Circular:
///   Lambda = (l cos + i sin)/(cos + i l sin),  beta' = beta/(cos + i l sin)
/// Hyperbolic:
///   Lambda = (l cosh + i sinh)/(cosh - i l sinh), beta' = beta/(cosh - i l sinh)
ForwardResult forward_map(RotationKind kind, double lambda, double phi, cdouble beta,
                          const TolerancePolicy& tol = {});

struct InverseResult {
    double lambda = 0;
    double phi = 0;
    double roundtrip_err = 0;
    bool branch_fallback = false;  // phi shifted by pi/2 to close the round trip
};

/// Lambda -> (lambda, phi) such that forward_map reproduces Lambda.
/// Circular: tan 2phi = 2 Ly / (1 - |Lambda|^2), quadrant chosen so the
/// round trip closes. Hyperbolic: tanh 2phi = 2 Ly / (1 + |Lambda|^2);
/// throws boundary_orbit on the ray Lx = 0, |Ly| >= 1 where no real
/// lambda exists (the points +-i are the tanh 2phi = +-1 boundary).
InverseResult inverse_map(RotationKind kind, cdouble Lambda, const TolerancePolicy& tol = {});

struct TransportResult {
    std::vector<IntelligentState> ois;
    std::vector<IntelligentState> gis;
    std::vector<EquivalenceRecord> records;
};

/// The theorem, direction (i): solve the OIS equation at
/// (lambda, phi) = inverse_map(Lambda), apply U = exp(i phi G), and verify
/// each transported state against the GIS equation with parameter Lambda.
/// One record per OIS branch.
TransportResult transport(const ObservablePair& pair, cdouble Lambda,
                          const TolerancePolicy& tol = {}, double leakage_threshold = 1e-8);

struct CovarianceAngle {
    double phi = 0;
    double predicted_cov_after = 0;
};

/// The theorem, direction (ii): the angle phi such that applying
/// exp(-i phi G) zeroes the symmetric covariance. Folded into
/// (-pi/4, pi/4] for circular pairs (the zero set is pi/2-periodic).
CovarianceAngle covariance_angle(RotationKind kind, const MomentSummary& m,
                                 const TolerancePolicy& tol = {});

/// Symmetric covariance of exp(-i phi G) psi predicted from the moments
/// of psi alone. Circular: sin(2phi)(varA - varB)/2 + cos(2phi) covS.
/// Hyperbolic: -sinh(2phi)(varA + varB)/2 + cosh(2phi) covS.
double predict_rotated_cov(RotationKind kind, const MomentSummary& m, double phi);

/// exp(i phi J3) exp(-i pi/2 J2) |J, m>; satisfies the GIS equation for
/// (J1, J2) with Lambda = i tan(phi) and has <J3> = 0.
CVector puri_state(double j, double m, double phi);

}  // namespace ist
