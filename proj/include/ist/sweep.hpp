#pragma once

#include <string>
#include <vector>

#include "ist/algebra.hpp"
#include "ist/equivalence.hpp"
#include "ist/types.hpp"

namespace ist {

/// Rectangular Lambda grid, row-major over (x index, y index).
struct GridSpec {
    double x_min = 0, x_max = 0;
    int nx = 1;
    double y_min = 0, y_max = 0;
    int ny = 1;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    cdouble point(int ix, int iy) const;
};

/// One grid point of a theorem sweep. Residual fields aggregate the worst
/// OIS branch; NaN marks points where the inverse prescription has no
/// solution (boundary) or no branch survives the leakage filter.
struct SweepRow {
    double lx = 0, ly = 0;
    double phi = 0, lambda = 0;
    double roundtrip_err = 0;
    double gis_residual = 0;
    double det_c_err = 0;
    double cov_after_rotation = 0;
    enum class Status { Ok, Boundary, NoBranch } status = Status::Ok;
};

/// Evaluate transport + covariance-zeroing diagnostics over the grid.
/// Grid points are independent and evaluated in parallel; row order is
/// fixed by the grid, so output is deterministic.
std::vector<SweepRow> run_sweep(const ObservablePair& pair, const GridSpec& grid,
                                const TolerancePolicy& tol = {},
                                double leakage_threshold = 1e-8);

extern const char* const kSweepCsvHeader;  // byte-exact schema line

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// %.17g (round-trippable doubles)
std::string format_double(double v);

}  // namespace ist
