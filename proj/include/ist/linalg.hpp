#pragma once

#include <vector>

#include "ist/matrix.hpp"
#include "ist/types.hpp"

namespace ist {

/// Full eigendecomposition of a general complex matrix.
/// One entry per *genuine* eigenvector: for a defective eigenvalue the
/// number of entries equals its geometric multiplicity, and
/// algebraic_multiplicities records the cluster size. Entries are sorted
/// by (Re, Im) of the eigenvalue. Eigenvectors are unit-norm with the
/// largest-magnitude component made real positive.
struct EigenSystem {
    std::vector<cdouble> eigenvalues;
    std::vector<CVector> eigenvectors;
    std::vector<int> geometric_multiplicities;
    std::vector<int> algebraic_multiplicities;
    std::vector<double> residuals;  // ||Mv - bv|| / max(1, ||M||)

    bool defective() const {
        for (std::size_t i = 0; i < eigenvalues.size(); ++i)
            if (algebraic_multiplicities[i] > geometric_multiplicities[i]) return true;
        return false;
    }
};

/// Matrix exponential by scaling-and-squaring with a degree-13 Padé core.
ComplexSquareMatrix mat_exp(const ComplexSquareMatrix& m, const TolerancePolicy& tol = {});

/// Dense non-Hermitian eigensolve: balancing, Householder reduction to
/// Hessenberg form, shifted QR iteration to Schur form, back-substituted
/// eigenvectors, then cluster analysis to detect defective eigenvalues
/// (genuine eigenvectors recovered through a rank-revealing null space).
EigenSystem eig(const ComplexSquareMatrix& m, const TolerancePolicy& tol = {});

/// ||Mv - beta v|| / max(1, ||M||_2), v assumed unit-norm.
double residual(const ComplexSquareMatrix& m, const CVector& v, cdouble beta);

/// Orthonormal basis of the numerical null space of m, rank threshold
/// rank_tol (absolute, compared against the pivoted-QR diagonal).
std::vector<CVector> null_space(const ComplexSquareMatrix& m, double rank_tol);

/// Solve m x = rhs by partially pivoted LU.
CVector solve_linear(const ComplexSquareMatrix& m, const CVector& rhs);

}  // namespace ist
