#pragma once

#include <vector>

#include "ist/algebra.hpp"
#include "ist/types.hpp"

namespace ist {

enum class StateStatus { Genuine, BoundaryDefective, TruncationUnsafe };

/// A solution of (A + i lambda B)|psi> = beta|psi>.
/// lambda real: ordinary intelligent state (Heisenberg equality).
/// lambda complex: generalized intelligent state (Schrödinger-Robertson
/// equality). beta = <A> + i lambda <B>.
struct IntelligentState {
    CVector psi;
    cdouble lambda;
    cdouble beta;
    StateStatus status = StateStatus::Genuine;
    double residual = 0.0;   // ||(A+i lambda B)psi - beta psi|| / max(1,||.||)
    double tail_mass = 0.0;  // truncation diagnostic, 0 for exact reps
};

struct MomentSummary {
    double mean_a = 0, mean_b = 0;
    double var_a = 0, var_b = 0;
    double cov_s = 0;            // symmetric covariance
    cdouble comm_expect;         // <[A,B]>
    double det_c = 0;            // var_a var_b - cov_s^2
    double v_crit = 0;           // sqrt(|<[A,B]>|^2/4 + cov_s^2)
    double hur_residual = 0;     // var_a var_b - |<[A,B]>|^2/4
    double srr_residual = 0;     // hur_residual - cov_s^2
};

enum class SqueezeClass { Coherent, ASqueezed, BSqueezed, UnsqueezedIntelligent };

/// All genuine eigenvectors of A + i lambda B, sorted by (Re, Im) of beta.
/// Defective eigenvalues contribute their genuine vectors only, marked
/// BoundaryDefective; truncated-basis states failing the leakage threshold
/// are returned but marked TruncationUnsafe.
std::vector<IntelligentState> solve_intelligent(const ObservablePair& pair, cdouble lambda,
                                                const TolerancePolicy& tol = {},
                                                double leakage_threshold = 1e-8);

/// First and second moments of {A, B} in the given unit-norm state.
/// enforce_leakage: throw truncation_unsafe when the state fails the
/// threshold on a truncated space.
MomentSummary moments(const ObservablePair& pair, const CVector& psi,
                      bool enforce_leakage = true, double leakage_threshold = 1e-8);

SqueezeClass classify(const MomentSummary& m, cdouble lambda, const TolerancePolicy& tol = {});

const char* to_string(StateStatus s);
const char* to_string(SqueezeClass c);

}  // namespace ist
