#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ist/kernels.hpp"
#include "ist/matrix.hpp"

using namespace ist;

namespace {

ComplexSquareMatrix random_matrix(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexSquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cdouble(u(rng), u(rng));
    return m;
}

}  // namespace

TEST_CASE("parallel matmul is bitwise identical to the serial reference") {
    for (std::size_t n : {std::size_t{5}, std::size_t{32}, std::size_t{97}}) {
        const ComplexSquareMatrix a = random_matrix(n, 100 + static_cast<unsigned>(n));
        const ComplexSquareMatrix b = random_matrix(n, 200 + static_cast<unsigned>(n));
        const ComplexSquareMatrix r_serial = kernels::matmul_serial(a, b);
        const ComplexSquareMatrix r_par = kernels::matmul_parallel(a, b);
        for (std::size_t i = 0; i < n * n; ++i) CHECK(r_serial.data()[i] == r_par.data()[i]);
    }
}

TEST_CASE("matmul against a hand-computed 2x2 product") {
    ComplexSquareMatrix a(2), b(2);
    a(0, 0) = cdouble(1, 1);
    a(0, 1) = 2.0;
    a(1, 0) = cdouble(0, -1);
    a(1, 1) = 1.0;
    b(0, 0) = 1.0;
    b(0, 1) = cdouble(0, 2);
    b(1, 0) = 3.0;
    b(1, 1) = cdouble(-1, 0);
    const ComplexSquareMatrix c = kernels::matmul(a, b);
    CHECK(c(0, 0) == cdouble(7, 1));
    CHECK(c(0, 1) == cdouble(-4, 2));
    CHECK(c(1, 0) == cdouble(3, -1));
    CHECK(c(1, 1) == cdouble(1, 0));
}

TEST_CASE("matvec matches matmul applied to a one-column extension") {
    const std::size_t n = 9;
    const ComplexSquareMatrix a = random_matrix(n, 5);
    CVector x(n);
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& e : x) e = cdouble(u(rng), u(rng));
    const CVector y = kernels::matvec(a, x);
    for (std::size_t i = 0; i < n; ++i) {
        cdouble s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
        CHECK(std::abs(y[i] - s) < 1e-14);
    }
}

TEST_CASE("conjugate_by with the identity is a no-op") {
    const ComplexSquareMatrix a = random_matrix(6, 8);
    const ComplexSquareMatrix r = kernels::conjugate_by(ComplexSquareMatrix::identity(6), a);
    CHECK(frobenius_norm(r - a) < 1e-14);
}

TEST_CASE("dimension mismatches are rejected") {
    const ComplexSquareMatrix a(3), b(4);
    CHECK_THROWS_AS(kernels::matmul(a, b), invalid_input);
    CVector x(5);
    CHECK_THROWS_AS(kernels::matvec(a, x), invalid_input);
}

TEST_CASE("kernel policy switch keeps results identical") {
    const ComplexSquareMatrix a = random_matrix(40, 1);
    const ComplexSquareMatrix b = random_matrix(40, 2);
    kernels::set_parallel(false);
    const ComplexSquareMatrix r1 = kernels::matmul(a, b);
    kernels::set_parallel(true);
    const ComplexSquareMatrix r2 = kernels::matmul(a, b);
    for (std::size_t i = 0; i < 40u * 40u; ++i) CHECK(r1.data()[i] == r2.data()[i]);
}
