#pragma once

#include "ist/algebra.hpp"
#include "ist/matrix.hpp"
#include "ist/types.hpp"

namespace ist {

/// Truncated single-mode Fock space: levels 0..cutoff-1.
struct FockSpace {
    int modes = 1;
    int cutoff = 0;
};

/// Annihilation/creation matrices on the truncated space,
/// a|n> = sqrt(n)|n-1>, a_dag = adjoint(a).
struct LadderSet {
    ComplexSquareMatrix a, a_dag;
};

LadderSet ladder_ops(int cutoff);

/// Two-mode Schwinger realization restricted to the N-photon sector,
/// where it reproduces the spin-(N/2) matrices under
/// |n_a, N-n_a>  <->  |J, m = n_a - N/2>.
GeneratorTriple schwinger_su2(int n_total);

/// Two-mode su(1,1) on the sector with fixed photon-number difference.
/// K3 is diagonal with eigenvalues n + (|sector_diff|+1)/2.
GeneratorTriple su11_two_mode(int sector_diff, int cutoff);

/// Single-mode su(1,1) on a parity sector of the truncated Fock space.
/// Bargmann index 1/4 (even) or 3/4 (odd).
GeneratorTriple su11_single_mode(Parity parity, int cutoff);

struct LeakageReport {
    double tail_mass = 0.0;
    double cutoff_doubling_delta = 0.0;
};

struct OpticalElement {
    enum class Kind { PhaseShift, BeamSplitter, Parametric };
    Kind kind = Kind::PhaseShift;
    int mode = 0;  // PhaseShift: 0 = a, 1 = b
    int axis = 1;  // BeamSplitter/Parametric: generator index (1 or 2)
    double phi = 0.0;
};

struct OpticalResult {
    ComplexSquareMatrix unitary;
    LeakageReport leakage;
};

/// Exponentiate the requested optical generator on the given sector space
/// and certify the truncation by rebuilding at twice the cutoff and
/// comparing generator moments on the transformed probe state.
/// Throws truncation_budget if the doubling delta exceeds 1e-6.
OpticalResult optical_unitary(const OpticalElement& element, const AlgebraKind& space,
                              std::size_t probe_index = 0);

}  // namespace ist
