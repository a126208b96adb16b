#include "ist/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ist/kernels.hpp"
#include "ist/linalg.hpp"

namespace ist {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// G is Hermitian, so exp(-i phi G) per branch angle is cheapest through a
// one-off spectral decomposition of G.
struct GeneratorExp {
    ComplexSquareMatrix z;
    std::vector<double> d;

    explicit GeneratorExp(const ComplexSquareMatrix& g) {
        const EigenSystem es = eig(g);
        const std::size_t n = g.dim();
        z = ComplexSquareMatrix(n);
        d.resize(n);
        if (es.eigenvalues.size() != n)
            throw numeric_failure("sweep: generator decomposition incomplete");
        for (std::size_t k = 0; k < n; ++k) {
            d[k] = es.eigenvalues[k].real();
            for (std::size_t i = 0; i < n; ++i) z(i, k) = es.eigenvectors[k][i];
        }
    }

    CVector apply(double phi, const CVector& v) const {
        const std::size_t n = d.size();
        CVector y(n, cdouble(0.0));
        // z^H v
        for (std::size_t k = 0; k < n; ++k) {
            cdouble s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::conj(z(i, k)) * v[i];
            y[k] = s * std::exp(cdouble(0.0, -phi * d[k]));
        }
        CVector out(n, cdouble(0.0));
        for (std::size_t k = 0; k < n; ++k) {
            const cdouble yk = y[k];
            if (yk == cdouble(0.0)) continue;
            for (std::size_t i = 0; i < n; ++i) out[i] += z(i, k) * yk;
        }
        return out;
    }
};

}  // namespace

cdouble GridSpec::point(int ix, int iy) const {
    const double x = nx > 1 ? x_min + ix * (x_max - x_min) / (nx - 1) : x_min;
    const double y = ny > 1 ? y_min + iy * (y_max - y_min) / (ny - 1) : y_min;
    return cdouble(x, y);
}

std::vector<SweepRow> run_sweep(const ObservablePair& pair, const GridSpec& grid,
                                const TolerancePolicy& tol, double leakage_threshold) {
    if (grid.nx < 1 || grid.ny < 1) throw invalid_input("run_sweep: empty grid");
    const std::size_t total = grid.size();
    std::vector<SweepRow> rows(total);
    const GeneratorExp gen_exp(pair.G);

    const std::ptrdiff_t n_flat = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t flat = 0; flat < n_flat; ++flat) {
        const int ix = static_cast<int>(flat) / grid.ny;
        const int iy = static_cast<int>(flat) % grid.ny;
        const cdouble Lambda = grid.point(ix, iy);
        SweepRow row;
        row.lx = Lambda.real();
        row.ly = Lambda.imag();
        try {
            const TransportResult tr = transport(pair, Lambda, tol, leakage_threshold);
            row.phi = tr.records.empty() ? kNan : tr.records.front().phi;
            row.lambda = tr.records.empty() ? kNan : tr.records.front().lambda;
            row.roundtrip_err = tr.records.empty() ? kNan : tr.records.front().roundtrip_err;
            double worst_gis = 0.0, worst_det = 0.0, worst_cov = 0.0;
            int used = 0;
            for (std::size_t b = 0; b < tr.gis.size(); ++b) {
                const IntelligentState& st = tr.gis[b];
                if (st.status == StateStatus::TruncationUnsafe) continue;
                ++used;
                worst_gis = std::max(worst_gis, tr.records[b].gis_residual);
                const MomentSummary m = moments(pair, st.psi, false);
                worst_det =
                    std::max(worst_det, std::abs(m.det_c - 0.25 * std::norm(m.comm_expect)));
                try {
                    const CovarianceAngle ca = covariance_angle(pair.kind, m, tol);
                    CVector back = gen_exp.apply(ca.phi, st.psi);
                    vec_normalize(back);
                    const MomentSummary m2 = moments(pair, back, false);
                    worst_cov = std::max(worst_cov, std::abs(m2.cov_s));
                } catch (const degenerate_state&) {
                    // isotropic/degenerate branch: already an OIS
                    worst_cov = std::max(worst_cov, std::abs(m.cov_s));
                }
            }
            if (used == 0) {
                row.status = SweepRow::Status::NoBranch;
                row.gis_residual = kNan;
                row.det_c_err = kNan;
                row.cov_after_rotation = kNan;
            } else {
                row.gis_residual = worst_gis;
                row.det_c_err = worst_det;
                row.cov_after_rotation = worst_cov;
            }
        } catch (const boundary_orbit&) {
            row.status = SweepRow::Status::Boundary;
            row.phi = kNan;
            row.lambda = kNan;
            row.roundtrip_err = kNan;
            row.gis_residual = kNan;
            row.det_c_err = kNan;
            row.cov_after_rotation = kNan;
        } catch (const error&) {
            // exceptions may not cross the parallel region; mark the row
            row.status = SweepRow::Status::NoBranch;
            row.phi = kNan;
            row.lambda = kNan;
            row.roundtrip_err = kNan;
            row.gis_residual = kNan;
            row.det_c_err = kNan;
            row.cov_after_rotation = kNan;
        }
        rows[flat] = row;
    }
    return rows;
}

const char* const kSweepCsvHeader =
    "Lx,Ly,phi,lambda,roundtrip_err,gis_residual,detC_err,cov_after_rotation";

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    for (const SweepRow& r : rows) {
        out += format_double(r.lx);
        out += ',';
        out += format_double(r.ly);
        out += ',';
        out += format_double(r.phi);
        out += ',';
        out += format_double(r.lambda);
        out += ',';
        out += format_double(r.roundtrip_err);
        out += ',';
        out += format_double(r.gis_residual);
        out += ',';
        out += format_double(r.det_c_err);
        out += ',';
        out += format_double(r.cov_after_rotation);
        out += '\n';
    }
    return out;
}

}  // namespace ist
