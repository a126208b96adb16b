#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "ist/kernels.hpp"
#include "ist/linalg.hpp"
#include "ist/matrix.hpp"

using namespace ist;

namespace {

// Independent oracle: plain term-by-term Taylor summation, adequate for
// small-norm inputs only.
ComplexSquareMatrix taylor_exp(const ComplexSquareMatrix& m, int terms) {
    ComplexSquareMatrix sum = ComplexSquareMatrix::identity(m.dim());
    ComplexSquareMatrix term = ComplexSquareMatrix::identity(m.dim());
    for (int k = 1; k <= terms; ++k) {
        term = kernels::matmul_serial(term, m);
        term *= cdouble(1.0 / k, 0.0);
        sum += term;
    }
    return sum;
}

// Independent oracle: eigenvalues of a 2x2 matrix from the quadratic formula.
std::pair<cdouble, cdouble> quadratic_eigs(const ComplexSquareMatrix& m) {
    const cdouble tr = m(0, 0) + m(1, 1);
    const cdouble det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const cdouble disc = std::sqrt(tr * tr - 4.0 * det);
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

ComplexSquareMatrix random_matrix(std::size_t n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexSquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cdouble(u(rng), u(rng));
    return m;
}

ComplexSquareMatrix random_anti_hermitian(std::size_t n, std::mt19937& rng) {
    ComplexSquareMatrix m = random_matrix(n, rng);
    const ComplexSquareMatrix mh = adjoint(m);
    ComplexSquareMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) - mh(i, j));
    return a;
}

}  // namespace

TEST_CASE("mat_exp of the zero matrix is the identity") {
    const ComplexSquareMatrix z(4);
    const ComplexSquareMatrix e = mat_exp(z);
    CHECK(frobenius_norm(e - ComplexSquareMatrix::identity(4)) < 1e-15);
}

TEST_CASE("mat_exp of a diagonal spin-1/2 phase generator") {
    // i*phi*diag(1/2,-1/2) at phi = pi
    const double phi = 3.14159265358979323846;
    ComplexSquareMatrix m(2);
    m(0, 0) = cdouble(0.0, 0.5 * phi);
    m(1, 1) = cdouble(0.0, -0.5 * phi);
    const ComplexSquareMatrix e = mat_exp(m);
    CHECK(std::abs(e(0, 0) - cdouble(0.0, 1.0)) < 1e-14);
    CHECK(std::abs(e(1, 1) - cdouble(0.0, -1.0)) < 1e-14);
    CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("mat_exp of a random anti-Hermitian matrix is unitary") {
    std::mt19937 rng(7);
    const ComplexSquareMatrix a = random_anti_hermitian(8, rng);
    const ComplexSquareMatrix u = mat_exp(a);
    CHECK(unitarity_defect(u) < 1e-10);
}

TEST_CASE("mat_exp agrees with Taylor summation at small norm") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        ComplexSquareMatrix m = random_matrix(6, rng);
        m *= cdouble(0.05, 0.0);  // keep the oracle well-converged
        const ComplexSquareMatrix ref = taylor_exp(m, 30);
        CHECK(frobenius_norm(mat_exp(m) - ref) < 1e-13);
    }
}

TEST_CASE("mat_exp(M) mat_exp(-M) = I") {
    std::mt19937 rng(13);
    for (std::size_t n : {std::size_t{3}, std::size_t{8}, std::size_t{17}}) {
        const ComplexSquareMatrix m = random_matrix(n, rng);
        ComplexSquareMatrix neg = m;
        neg *= cdouble(-1.0, 0.0);
        const ComplexSquareMatrix p = kernels::matmul_serial(mat_exp(m), mat_exp(neg));
        CHECK(frobenius_norm(p - ComplexSquareMatrix::identity(n)) < 1e-9 * static_cast<double>(n));
    }
}

TEST_CASE("mat_exp rejects non-finite input") {
    ComplexSquareMatrix m(2);
    m(0, 1) = cdouble(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(mat_exp(m), invalid_input);
}

TEST_CASE("eig on a diagonal matrix returns the diagonal and basis vectors") {
    const ComplexSquareMatrix m = ComplexSquareMatrix::diagonal({1.0, 2.0, 3.0});
    const EigenSystem es = eig(m);
    REQUIRE(es.eigenvalues.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(es.eigenvalues[k] - cdouble(k + 1.0, 0.0)) < 1e-14);
        CHECK(std::abs(es.eigenvectors[k][k] - cdouble(1.0, 0.0)) < 1e-14);
        CHECK(es.geometric_multiplicities[k] == 1);
    }
    CHECK(!es.defective());
}

TEST_CASE("eig flags the 2x2 nilpotent Jordan block") {
    ComplexSquareMatrix m(2);
    m(0, 1) = 1.0;
    const EigenSystem es = eig(m);
    REQUIRE(es.eigenvalues.size() == 1);
    CHECK(std::abs(es.eigenvalues[0]) < 1e-12);
    CHECK(std::abs(es.eigenvectors[0][0] - cdouble(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(es.eigenvectors[0][1]) < 1e-12);
    CHECK(es.geometric_multiplicities[0] == 1);
    CHECK(es.algebraic_multiplicities[0] == 2);
    CHECK(es.defective());
}

TEST_CASE("eig handles a repeated but non-defective eigenvalue") {
    const ComplexSquareMatrix m = ComplexSquareMatrix::diagonal({1.0, 1.0, 2.0});
    const EigenSystem es = eig(m);
    REQUIRE(es.eigenvalues.size() == 3);
    int ones = 0;
    for (std::size_t k = 0; k < 3; ++k)
        if (std::abs(es.eigenvalues[k] - cdouble(1.0, 0.0)) < 1e-12) {
            ++ones;
            CHECK(es.geometric_multiplicities[k] == 2);
            CHECK(es.algebraic_multiplicities[k] == 2);
        }
    CHECK(ones == 2);
    CHECK(!es.defective());
}

TEST_CASE("eig matches the 2x2 quadratic-formula oracle") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const ComplexSquareMatrix m = random_matrix(2, rng);
        auto [r1, r2] = quadratic_eigs(m);
        const EigenSystem es = eig(m);
        REQUIRE(es.eigenvalues.size() == 2);
        const double d1 =
            std::min(std::abs(es.eigenvalues[0] - r1) + std::abs(es.eigenvalues[1] - r2),
                     std::abs(es.eigenvalues[0] - r2) + std::abs(es.eigenvalues[1] - r1));
        CHECK(d1 < 1e-10);
    }
}

TEST_CASE("eig residuals stay below rtol across random matrices") {
    const TolerancePolicy tol;
    for (std::size_t n = 2; n <= 16; ++n) {
        double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
        for (int rep = 0; rep < 1000; ++rep) {
            std::mt19937 rng(static_cast<unsigned>(1000 * n + rep));
            const ComplexSquareMatrix m = random_matrix(n, rng);
            const EigenSystem es = eig(m);
            for (std::size_t k = 0; k < es.eigenvalues.size(); ++k)
                worst = std::max(worst, es.residuals[k]);
        }
        CHECK(worst <= tol.rtol);
    }
}

TEST_CASE("eigenvalues of Hermitian matrices are real to atol") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        ComplexSquareMatrix m = random_matrix(9, rng);
        const ComplexSquareMatrix mh = adjoint(m);
        m += mh;
        const EigenSystem es = eig(m);
        for (const cdouble& v : es.eigenvalues) CHECK(std::abs(v.imag()) < 1e-10);
    }
}

TEST_CASE("residual examples") {
    const ComplexSquareMatrix id = ComplexSquareMatrix::identity(3);
    CVector v{1.0, 0.0, 0.0};
    CHECK(residual(id, v, cdouble(1.0, 0.0)) < 1e-15);

    const ComplexSquareMatrix d = ComplexSquareMatrix::diagonal({2.0, 3.0});
    CVector e0{1.0, 0.0};
    CHECK(residual(d, e0, cdouble(2.0, 0.0)) < 1e-15);
    CHECK(residual(d, e0, cdouble(2.1, 0.0)) == doctest::Approx(0.1 / 3.0).epsilon(1e-9));

    CVector wrong_dim{1.0, 0.0, 0.0};
    CHECK_THROWS_AS(residual(d, wrong_dim, cdouble(0.0)), invalid_input);
}

TEST_CASE("null_space recovers the kernel of a rank-deficient matrix") {
    ComplexSquareMatrix m(3);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;  // rows (1,1,0),(0,0,1),(0,0,0): kernel = span{(1,-1,0)}
    const auto basis = null_space(m, 1e-10);
    REQUIRE(basis.size() == 1);
    const CVector w = kernels::matvec(m, basis[0]);
    CHECK(vec_norm(w) < 1e-12);
}

TEST_CASE("solve_linear inverts a well-conditioned system") {
    std::mt19937 rng(29);
    const ComplexSquareMatrix m =
        random_matrix(6, rng) + cdouble(4.0) * ComplexSquareMatrix::identity(6);
    CVector b(6);
    for (auto& x : b) x = cdouble(1.0, -0.5);
    const CVector x = solve_linear(m, b);
    CVector r = kernels::matvec(m, x);
    for (std::size_t i = 0; i < 6; ++i) r[i] -= b[i];
    CHECK(vec_norm(r) < 1e-11);
}
