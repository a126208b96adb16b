// Timings of the OpenMP kernels against the serial reference, plus one
// grid sweep both ways. Build with the library; run with OMP_NUM_THREADS
// set to taste.

#include <omp.h>

#include <cstdio>
#include <random>

#include "ist/algebra.hpp"
#include "ist/kernels.hpp"
#include "ist/linalg.hpp"
#include "ist/sweep.hpp"

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

template <typename F>
double time_ms(F&& f, int reps) {
    const double t0 = omp_get_wtime();
    for (int r = 0; r < reps; ++r) f();
    return 1000.0 * (omp_get_wtime() - t0) / reps;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial ms", "parallel", "speedup");
    for (std::size_t n : {std::size_t{64}, std::size_t{128}, std::size_t{256}}) {
        const ComplexSquareMatrix a = random_matrix(n, 1);
        const ComplexSquareMatrix b = random_matrix(n, 2);
        const int reps = n <= 128 ? 20 : 5;
        const double ts = time_ms([&] { kernels::matmul_serial(a, b); }, reps);
        const double tp = time_ms([&] { kernels::matmul_parallel(a, b); }, reps);
        std::printf("matmul n=%-20zu %10.3f %10.3f %7.2fx\n", n, ts, tp, ts / tp);
    }

    for (std::size_t n : {std::size_t{96}}) {
        ComplexSquareMatrix m = random_matrix(n, 3);
        m *= cdouble(0.5, 0.0);
        kernels::set_parallel(false);
        const double ts = time_ms([&] { mat_exp(m); }, 5);
        kernels::set_parallel(true);
        const double tp = time_ms([&] { mat_exp(m); }, 5);
        std::printf("mat_exp n=%-19zu %10.3f %10.3f %7.2fx\n", n, ts, tp, ts / tp);
    }

    {
        const ObservablePair pair = make_pair(AlgebraKind::su2(5.0), PairSelector::J1J2);
        GridSpec grid{-1.5, 1.5, 12, -1.5, 1.5, 12};
        kernels::set_parallel(false);
        omp_set_num_threads(1);
        const double ts = time_ms([&] { run_sweep(pair, grid); }, 1);
        omp_set_num_threads(omp_get_num_procs());
        kernels::set_parallel(true);
        const double tp = time_ms([&] { run_sweep(pair, grid); }, 1);
        std::printf("sweep su2 J=5 12x12 grid     %10.3f %10.3f %7.2fx\n", ts, tp, ts / tp);
    }
    return 0;
}
