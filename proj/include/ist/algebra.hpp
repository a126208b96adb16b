#pragma once

#include <vector>

#include "ist/matrix.hpp"
#include "ist/types.hpp"

namespace ist {

enum class RotationKind { Circular, Hyperbolic };
enum class Parity { Even, Odd };

/// Which finite-dimensional representation the generators live in.
///  - Su2Spin: exact spin-J matrices, dimension 2J+1.
///  - Su11TwoMode: two-mode realization reduced to a fixed
///    photon-number-difference sector; cutoff counts sector levels.
///  - Su11SingleMode: single-mode realization on a parity sector of a
///    Fock space truncated at `cutoff` levels.
struct AlgebraKind {
    enum class Family { Su2Spin, Su11TwoMode, Su11SingleMode };

    Family family = Family::Su2Spin;
    double spin_j = 0.5;      // Su2Spin
    int sector_diff = 0;      // Su11TwoMode
    Parity parity = Parity::Even;  // Su11SingleMode
    int cutoff = 0;

    static AlgebraKind su2(double j);
    static AlgebraKind su11_two_mode(int sector_diff, int cutoff);
    static AlgebraKind su11_single_mode(Parity parity, int cutoff);

    bool is_truncated() const { return family != Family::Su2Spin; }
    std::size_t dim() const;

    /// 1 for rows safely inside the truncation (at least 5 sector levels
    /// below the cutoff), 0 near the edge. All-ones for exact su(2).
    std::vector<int> interior_mask() const;
};

struct GeneratorTriple {
    ComplexSquareMatrix g1, g2, g3;
};

enum class PairSelector { J1J2, J2J3, J3J1, K1K2, K1K3, K2K3 };

/// The pair {A, B} with the Hermitian generator G of the unitary that
/// rotates them. G is oriented so that U = exp(i phi G) conjugates
/// (A, B) into the canonical circular form
///     (cos A - sin B,  sin A + cos B)
/// or the canonical hyperbolic form
///     (cosh A - sinh B, -sinh A + cosh B).
struct ObservablePair {
    ComplexSquareMatrix A, B, G;
    RotationKind kind = RotationKind::Circular;
    AlgebraKind algebra;
    PairSelector selector = PairSelector::J1J2;
    std::vector<int> interior;
};

/// Spin-J matrices in the descending J3 eigenbasis (m = J..-J).
/// [J1,J2] = i J3 and cyclic hold exactly up to rounding.
GeneratorTriple make_spin_observables(double j);

ObservablePair make_pair(const AlgebraKind& algebra, PairSelector which);

/// Max deviation of exp(i phi G) (A,B) exp(-i phi G) from the canonical
/// rotated pair, Frobenius norm on the interior rows/columns.
double check_rotation(const ObservablePair& pair, double phi);

/// Same check with the pair rebuilt at cutoff_factor times the cutoff and
/// the deviation measured on the original interior window; isolates the
/// identity from boundary-reflection artifacts of the working cutoff.
/// Strong pseudo-rotations spread states far up the ladder, so larger
/// |phi| needs a larger factor (x4 certifies |phi| <= 1).
double check_rotation_converged(const AlgebraKind& algebra, PairSelector which, double phi,
                                int cutoff_factor = 2);

ComplexSquareMatrix commutator(const ComplexSquareMatrix& a, const ComplexSquareMatrix& b);

/// Zero out rows/columns not marked by the mask.
ComplexSquareMatrix project_interior(const ComplexSquareMatrix& m, const std::vector<int>& mask);

/// Probability mass in the top 5 sector levels (0 for exact su(2)).
double tail_mass(const CVector& v, const AlgebraKind& algebra);

const char* to_string(PairSelector s);
const char* to_string(RotationKind k);

}  // namespace ist
