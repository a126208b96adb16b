#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ist {

using cdouble = std::complex<double>;

/// Relative/absolute tolerance pair used throughout the toolkit.
/// rtol gates relative residuals (eigen-equations, round trips),
/// atol gates quantities expected to vanish identically.
struct TolerancePolicy {
    double rtol = 1e-9;
    double atol = 1e-10;
};

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions.
struct invalid_input : error {
    using error::error;
};

/// An iterative method failed to converge; message carries diagnostics.
struct numeric_failure : error {
    numeric_failure(const std::string& what, int iterations_done = 0)
        : error(what), iterations(iterations_done) {}
    int iterations;
};

/// A state leaks too much probability into the top of a truncated basis.
struct truncation_unsafe : error {
    using error::error;
};

/// An observable changed beyond budget when the cutoff was doubled.
struct truncation_budget : error {
    using error::error;
};

/// Parameter map hit a vanishing denominator.
struct singular_map : error {
    using error::error;
};

/// Hyperbolic inverse prescription has no finite solution at this point.
struct boundary_orbit : error {
    using error::error;
};

/// Moments too degenerate to define a rotation angle.
struct degenerate_state : error {
    using error::error;
};

}  // namespace ist
