// Command-line front end: construct intelligent states, verify the
// OIS/GIS equivalence, sweep the Lambda plane, and expose the bosonic
// optical elements. Exit codes: 0 success, 2 usage/config error,
// 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ist/algebra.hpp"
#include "ist/bosonic.hpp"
#include "ist/equivalence.hpp"
#include "ist/intelligent.hpp"
#include "ist/kernels.hpp"
#include "ist/linalg.hpp"
#include "ist/sweep.hpp"

using nlohmann::json;
using namespace ist;

namespace {

cdouble parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw invalid_input("empty complex literal");

    auto to_double = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size())
            throw invalid_input("bad complex literal: '" + t + "'");
        return v;
    };

    if (s.back() == 'i' || s.back() == 'I') {
        const std::string body = s.substr(0, s.size() - 1);
        // split at the last +/- that is not an exponent sign
        for (std::size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
                return cdouble(to_double(body.substr(0, k)), to_double(body.substr(k)));
            }
        }
        return cdouble(0.0, to_double(body));
    }
    return cdouble(to_double(s), 0.0);
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    double x0, x1, y0, y1;
    int nx, ny;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d,%lf:%lf:%d", &x0, &x1, &nx, &y0, &y1, &ny) != 6)
        throw invalid_input("bad grid spec, expected LxMIN:LxMAX:N,LyMIN:LyMAX:N");
    if (nx < 1 || ny < 1) throw invalid_input("grid spec: counts must be positive");
    g.x_min = x0;
    g.x_max = x1;
    g.nx = nx;
    g.y_min = y0;
    g.y_max = y1;
    g.ny = ny;
    return g;
}

struct CommonOpts {
    std::string algebra = "su2";
    double j = 0.5;
    std::string parity = "even";
    int sector_diff = 0;
    int cutoff = 0;
    std::string pair = "J1J2";
    double rtol = 1e-9;
    double atol = 1e-10;
    double leakage = 1e-8;
    std::string format = "json";
    std::string out;
};

AlgebraKind algebra_of(const CommonOpts& o) {
    if (o.algebra == "su2") return AlgebraKind::su2(o.j);
    if (o.algebra == "su11-two")
        return AlgebraKind::su11_two_mode(o.sector_diff, o.cutoff > 0 ? o.cutoff : 48);
    if (o.algebra == "su11-single") {
        Parity p;
        if (o.parity == "even")
            p = Parity::Even;
        else if (o.parity == "odd")
            p = Parity::Odd;
        else
            throw invalid_input("parity must be even or odd");
        return AlgebraKind::su11_single_mode(p, o.cutoff > 0 ? o.cutoff : 64);
    }
    throw invalid_input("algebra must be su2, su11-two or su11-single");
}

PairSelector pair_of(const std::string& s) {
    if (s == "J1J2") return PairSelector::J1J2;
    if (s == "J2J3") return PairSelector::J2J3;
    if (s == "J3J1") return PairSelector::J3J1;
    if (s == "K1K2") return PairSelector::K1K2;
    if (s == "K1K3") return PairSelector::K1K3;
    if (s == "K2K3") return PairSelector::K2K3;
    throw invalid_input("pair must be one of J1J2 J2J3 J3J1 K1K2 K1K3 K2K3");
}

TolerancePolicy tol_of(const CommonOpts& o) {
    if (o.rtol <= 0.0 || o.atol <= 0.0) throw invalid_input("tolerances must be positive");
    return TolerancePolicy{o.rtol, o.atol};
}

json complex_json(cdouble z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json config_echo(const CommonOpts& o) {
    json c{{"algebra", o.algebra}, {"pair", o.pair},     {"rtol", o.rtol},
           {"atol", o.atol},       {"format", o.format}, {"leakage", o.leakage}};
    if (o.algebra == "su2") c["j"] = o.j;
    if (o.algebra == "su11-two") {
        c["sector_diff"] = o.sector_diff;
        c["cutoff"] = o.cutoff > 0 ? o.cutoff : 48;
    }
    if (o.algebra == "su11-single") {
        c["parity"] = o.parity;
        c["cutoff"] = o.cutoff > 0 ? o.cutoff : 64;
    }
    return c;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw invalid_input("cannot open output path: " + out_path);
    f << text;
}

std::string csv_cell(double v) { return format_double(v); }

// ---- states ----------------------------------------------------------

int cmd_states(const CommonOpts& o, const std::string& lambda_text, double srr_tol_opt) {
    const AlgebraKind alg = algebra_of(o);
    const ObservablePair pair = make_pair(alg, pair_of(o.pair));
    const TolerancePolicy tol = tol_of(o);
    const cdouble lambda = parse_complex(lambda_text);
    const double srr_tol = srr_tol_opt > 0 ? srr_tol_opt : (alg.is_truncated() ? 1e-6 : 1e-9);

    const auto states = solve_intelligent(pair, lambda, tol, o.leakage);
    json results = json::array();
    int genuine = 0, defective = 0, unsafe = 0, failed = 0;
    double max_srr = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& s = states[k];
        json row{{"index", k},
                 {"beta", complex_json(s.beta)},
                 {"status", to_string(s.status)},
                 {"residual", s.residual},
                 {"tail_mass", s.tail_mass}};
        if (s.status != StateStatus::TruncationUnsafe) {
            const MomentSummary m = moments(pair, s.psi, false);
            row["mean_a"] = m.mean_a;
            row["mean_b"] = m.mean_b;
            row["var_a"] = m.var_a;
            row["var_b"] = m.var_b;
            row["cov_s"] = m.cov_s;
            row["comm_expect"] = complex_json(m.comm_expect);
            row["det_c"] = m.det_c;
            row["v_crit"] = m.v_crit;
            row["hur_residual"] = m.hur_residual;
            row["srr_residual"] = m.srr_residual;
            row["class"] = to_string(classify(m, lambda, tol));
            if (s.status == StateStatus::Genuine) {
                ++genuine;
                max_srr = std::max(max_srr, std::abs(m.srr_residual));
                if (std::abs(m.srr_residual) > srr_tol) ++failed;
            } else {
                ++defective;
            }
        } else {
            ++unsafe;
        }
        results.push_back(std::move(row));
    }

    json doc{{"config", config_echo(o)},
             {"results", results},
             {"summary",
              {{"genuine", genuine},
               {"boundary_defective", defective},
               {"truncation_unsafe", unsafe},
               {"max_srr_residual", max_srr},
               {"srr_tolerance", srr_tol},
               {"pass", failed == 0}}}};
    doc["config"]["lambda"] = complex_json(lambda);

    if (o.format == "csv") {
        std::string text =
            "index,beta_re,beta_im,status,class,mean_a,mean_b,var_a,var_b,cov_s,comm_re,comm_im,"
            "det_c,v_crit,hur_residual,srr_residual,residual,tail_mass\n";
        for (const auto& r : results) {
            text += r["index"].dump();
            text += ',' + csv_cell(r["beta"]["re"].get<double>());
            text += ',' + csv_cell(r["beta"]["im"].get<double>());
            text += ',' + r["status"].get<std::string>();
            const bool have = r.contains("class");
            text += ',' + (have ? r["class"].get<std::string>() : std::string("-"));
            auto num = [&](const char* key) {
                return have ? csv_cell(r[key].get<double>()) : std::string("nan");
            };
            text += ',' + num("mean_a") + ',' + num("mean_b") + ',' + num("var_a") + ',' +
                    num("var_b") + ',' + num("cov_s");
            text += ',' + (have ? csv_cell(r["comm_expect"]["re"].get<double>())
                                : std::string("nan"));
            text += ',' + (have ? csv_cell(r["comm_expect"]["im"].get<double>())
                                : std::string("nan"));
            text += ',' + num("det_c") + ',' + num("v_crit") + ',' + num("hur_residual") + ',' +
                    num("srr_residual");
            text += ',' + csv_cell(r["residual"].get<double>());
            text += ',' + csv_cell(r["tail_mass"].get<double>());
            text += '\n';
        }
        emit(text, o.out);
    } else {
        emit(doc.dump(2) + "\n", o.out);
    }
    return failed == 0 ? 0 : 1;
}

// ---- map -------------------------------------------------------------

int cmd_map(const CommonOpts& o, const std::string& kind_text, const std::string& Lambda_text,
            const std::string& grid_text) {
    const TolerancePolicy tol = tol_of(o);
    RotationKind kind;
    if (kind_text == "circular")
        kind = RotationKind::Circular;
    else if (kind_text == "hyperbolic")
        kind = RotationKind::Hyperbolic;
    else
        throw invalid_input("kind must be circular or hyperbolic");

    std::vector<cdouble> points;
    if (!grid_text.empty()) {
        const GridSpec g = parse_grid(grid_text);
        for (int ix = 0; ix < g.nx; ++ix)
            for (int iy = 0; iy < g.ny; ++iy) points.push_back(g.point(ix, iy));
    } else if (!Lambda_text.empty()) {
        points.push_back(parse_complex(Lambda_text));
    } else {
        throw invalid_input("map needs --Lambda or --grid");
    }

    json results = json::array();
    bool all_pass = true;
    double max_rt = 0.0;
    for (const cdouble L : points) {
        json row{{"Lambda", complex_json(L)}};
        try {
            const InverseResult inv = inverse_map(kind, L, tol);
            row["lambda"] = inv.lambda;
            row["phi"] = inv.phi;
            row["roundtrip_err"] = inv.roundtrip_err;
            row["branch"] = inv.branch_fallback ? "fallback" : "primary";
            max_rt = std::max(max_rt, inv.roundtrip_err);
            if (inv.roundtrip_err > tol.rtol) all_pass = false;
        } catch (const boundary_orbit&) {
            row["branch"] = "boundary";  // expected at Lambda = +-i and on the ray
        }
        results.push_back(std::move(row));
    }

    json doc{
        {"config", config_echo(o)},
        {"results", results},
        {"summary",
         {{"points", points.size()}, {"max_roundtrip_err", max_rt}, {"pass", all_pass}}}};
    doc["config"]["kind"] = kind_text;

    if (o.format == "csv") {
        std::string text = "Lx,Ly,lambda,phi,roundtrip_err,branch\n";
        for (const auto& r : results) {
            text += csv_cell(r["Lambda"]["re"].get<double>());
            text += ',' + csv_cell(r["Lambda"]["im"].get<double>());
            const bool b = r["branch"] == "boundary";
            text += ',' + (b ? std::string("nan") : csv_cell(r["lambda"].get<double>()));
            text += ',' + (b ? std::string("nan") : csv_cell(r["phi"].get<double>()));
            text += ',' + (b ? std::string("nan") : csv_cell(r["roundtrip_err"].get<double>()));
            text += ',' + r["branch"].get<std::string>();
            text += '\n';
        }
        emit(text, o.out);
    } else {
        emit(doc.dump(2) + "\n", o.out);
    }
    return all_pass ? 0 : 1;
}

// ---- verify ----------------------------------------------------------

int cmd_verify(const CommonOpts& o, const std::string& grid_text, double gis_tol_opt,
               double cov_tol_opt, double detc_tol_opt) {
    const AlgebraKind alg = algebra_of(o);
    const ObservablePair pair = make_pair(alg, pair_of(o.pair));
    const TolerancePolicy tol = tol_of(o);
    if (grid_text.empty()) throw invalid_input("verify needs --grid");
    const GridSpec grid = parse_grid(grid_text);

    const bool truncated = alg.is_truncated();
    const double gis_tol = gis_tol_opt > 0 ? gis_tol_opt : (truncated ? 1e-6 : 1e-9);
    const double cov_tol = cov_tol_opt > 0 ? cov_tol_opt : (truncated ? 1e-6 : 1e-10);
    const double detc_tol = detc_tol_opt > 0 ? detc_tol_opt : (truncated ? 1e-6 : 1e-9);

    json results = json::array();
    int tested = 0, passed = 0, boundary = 0, skipped = 0;
    double max_gis = 0.0, max_cov = 0.0, max_detc = 0.0;

    for (int ix = 0; ix < grid.nx; ++ix) {
        for (int iy = 0; iy < grid.ny; ++iy) {
            const cdouble L = grid.point(ix, iy);
            json row{{"Lambda", complex_json(L)}};
            try {
                const TransportResult tr = transport(pair, L, tol, o.leakage);
                json branches = json::array();
                int used = 0;
                for (std::size_t b = 0; b < tr.records.size(); ++b) {
                    const EquivalenceRecord& rec = tr.records[b];
                    if (rec.status == StateStatus::TruncationUnsafe) continue;
                    ++used;
                    const MomentSummary m = moments(pair, tr.gis[b].psi, false);
                    const double detc_err = std::abs(m.det_c - 0.25 * std::norm(m.comm_expect));
                    double cov_after = std::abs(m.cov_s);
                    try {
                        const CovarianceAngle ca = covariance_angle(pair.kind, m, tol);
                        ComplexSquareMatrix gen = pair.G;
                        gen *= cdouble(0.0, -ca.phi);
                        CVector back = kernels::matvec(mat_exp(gen, tol), tr.gis[b].psi);
                        vec_normalize(back);
                        cov_after = std::abs(moments(pair, back, false).cov_s);
                    } catch (const degenerate_state&) {
                        // isotropic branch; the unrotated covariance is the answer
                    }
                    const bool ok = rec.gis_residual <= gis_tol && cov_after <= cov_tol &&
                                    detc_err <= detc_tol;
                    ++tested;
                    if (ok) ++passed;
                    max_gis = std::max(max_gis, rec.gis_residual);
                    max_cov = std::max(max_cov, cov_after);
                    max_detc = std::max(max_detc, detc_err);
                    branches.push_back(json{{"beta", complex_json(rec.beta)},
                                            {"beta_prime", complex_json(rec.beta_prime)},
                                            {"lambda", rec.lambda},
                                            {"phi", rec.phi},
                                            {"roundtrip_err", rec.roundtrip_err},
                                            {"gis_residual", rec.gis_residual},
                                            {"cov_after_rotation", cov_after},
                                            {"detC_err", detc_err},
                                            {"status", to_string(rec.status)},
                                            {"pass", ok}});
                }
                row["branches"] = std::move(branches);
                if (used == 0) {
                    row["note"] = "no truncation-safe branch";
                    ++skipped;
                }
            } catch (const boundary_orbit&) {
                row["note"] = "boundary";
                ++boundary;
            }
            results.push_back(std::move(row));
        }
    }

    const bool pass = tested > 0 && passed == tested;
    json doc{{"config", config_echo(o)},
             {"results", results},
             {"summary",
              {{"branches_tested", tested},
               {"branches_passed", passed},
               {"boundary_points", boundary},
               {"skipped_points", skipped},
               {"max_gis_residual", max_gis},
               {"max_cov_after_rotation", max_cov},
               {"max_detC_err", max_detc},
               {"gis_tolerance", gis_tol},
               {"cov_tolerance", cov_tol},
               {"detC_tolerance", detc_tol},
               {"pass", pass}}}};
    doc["config"]["grid"] = grid_text;
    emit(doc.dump(2) + "\n", o.out);
    return pass ? 0 : 1;
}

// ---- sweep -----------------------------------------------------------

int cmd_sweep(const CommonOpts& o, const std::string& grid_text) {
    const AlgebraKind alg = algebra_of(o);
    const ObservablePair pair = make_pair(alg, pair_of(o.pair));
    const TolerancePolicy tol = tol_of(o);
    if (grid_text.empty()) throw invalid_input("sweep needs --grid");
    const GridSpec grid = parse_grid(grid_text);

    const auto rows = run_sweep(pair, grid, tol, o.leakage);
    if (o.format == "csv") {
        emit(sweep_to_csv(rows), o.out);
    } else {
        json results = json::array();
        for (const auto& r : rows) {
            const char* status =
                r.status == SweepRow::Status::Ok
                    ? "ok"
                    : (r.status == SweepRow::Status::Boundary ? "boundary" : "no-branch");
            results.push_back(json{{"Lx", r.lx},
                                   {"Ly", r.ly},
                                   {"phi", r.phi},
                                   {"lambda", r.lambda},
                                   {"roundtrip_err", r.roundtrip_err},
                                   {"gis_residual", r.gis_residual},
                                   {"detC_err", r.det_c_err},
                                   {"cov_after_rotation", r.cov_after_rotation},
                                   {"status", status}});
        }
        json doc{{"config", config_echo(o)}, {"results", results}};
        doc["config"]["grid"] = grid_text;
        emit(doc.dump(2) + "\n", o.out);
    }
    return 0;
}

// ---- bosonic ---------------------------------------------------------

int cmd_bosonic(const CommonOpts& o, const std::string& element, const std::string& mode,
                int axis, double phi, int probe) {
    const AlgebraKind space = algebra_of(o);
    OpticalElement el;
    if (element == "phase")
        el.kind = OpticalElement::Kind::PhaseShift;
    else if (element == "beam-splitter")
        el.kind = OpticalElement::Kind::BeamSplitter;
    else if (element == "parametric")
        el.kind = OpticalElement::Kind::Parametric;
    else
        throw invalid_input("element must be phase, beam-splitter or parametric");
    if (mode == "a")
        el.mode = 0;
    else if (mode == "b")
        el.mode = 1;
    else
        throw invalid_input("mode must be a or b");
    el.axis = axis;
    el.phi = phi;

    const OpticalResult r = optical_unitary(el, space, static_cast<std::size_t>(probe));
    const CVector psi = kernels::matvec(
        r.unitary, basis_vector(r.unitary.dim(), static_cast<std::size_t>(probe)));

    json doc{{"config", config_echo(o)},
             {"results",
              {{"dim", r.unitary.dim()},
               {"unitarity_defect", unitarity_defect(r.unitary)},
               {"tail_mass", r.leakage.tail_mass},
               {"cutoff_doubling_delta", r.leakage.cutoff_doubling_delta}}},
             {"summary", {{"pass", true}}}};
    doc["config"]["element"] = element;
    doc["config"]["phi"] = phi;
    doc["config"]["probe"] = probe;

    // probe statistics under the observable pair of this space
    const ObservablePair p12 =
        make_pair(space, space.family == AlgebraKind::Family::Su2Spin ? PairSelector::J1J2
                                                                      : PairSelector::K1K2);
    const MomentSummary m = moments(p12, psi, false);
    doc["results"]["probe_mean_g1"] = m.mean_a;
    doc["results"]["probe_mean_g2"] = m.mean_b;
    doc["results"]["probe_var_g1"] = m.var_a;
    doc["results"]["probe_var_g2"] = m.var_b;
    emit(doc.dump(2) + "\n", o.out);
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--algebra", o.algebra, "su2 | su11-two | su11-single");
    cmd->add_option("--j", o.j, "spin J (su2)");
    cmd->add_option("--parity", o.parity, "even | odd (su11-single)");
    cmd->add_option("--sector-diff", o.sector_diff, "photon-number difference (su11-two)");
    cmd->add_option("--cutoff", o.cutoff, "truncation cutoff");
    cmd->add_option("--pair", o.pair, "J1J2 J2J3 J3J1 K1K2 K1K3 K2K3");
    cmd->add_option("--rtol", o.rtol, "relative residual tolerance");
    cmd->add_option("--atol", o.atol, "absolute tolerance");
    cmd->add_option("--leakage", o.leakage, "tail-mass threshold for truncated states");
    cmd->add_option("--format", o.format, "json | csv");
    cmd->add_option("--out", o.out, "output path (default stdout)");
}

std::vector<std::string> args_from_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw invalid_input("cannot read config file: " + path);
    json j;
    f >> j;
    if (!j.is_object()) throw invalid_input("config file must hold a JSON object");
    std::vector<std::string> args;
    for (const auto& [key, value] : j.items()) {
        args.push_back("--" + key);
        if (value.is_string())
            args.push_back(value.get<std::string>());
        else
            args.push_back(value.dump());
    }
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intelligent-state toolkit for su(2) and su(1,1)"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CommonOpts o;
    std::string lambda_text, Lambda_text, grid_text, kind_text = "circular";
    std::string element = "phase", mode = "a";
    int axis = 1, probe = 0;
    double phi = 0.0;
    double srr_tol = 0.0, gis_tol = 0.0, cov_tol = 0.0, detc_tol = 0.0;
    std::string config_path;

    CLI::App* states = app.add_subcommand("states", "solve the intelligent-state equation");
    add_common(states, o);
    states->add_option("--lambda", lambda_text, "squeezing parameter, a+bi");
    states->add_option("--srr-tol", srr_tol, "pass threshold on the SRR equality residual");
    states->add_option("--config", config_path, "JSON config merged under flags");

    CLI::App* map_cmd = app.add_subcommand("map", "forward/inverse parameter maps");
    add_common(map_cmd, o);
    map_cmd->add_option("--kind", kind_text, "circular | hyperbolic");
    map_cmd->add_option("--Lambda", Lambda_text, "GIS parameter, a+bi");
    map_cmd->add_option("--grid", grid_text, "LxMIN:LxMAX:N,LyMIN:LyMAX:N");
    map_cmd->add_option("--config", config_path, "JSON config merged under flags");

    CLI::App* verify = app.add_subcommand("verify", "transport + covariance-zeroing checks");
    add_common(verify, o);
    verify->add_option("--grid", grid_text, "LxMIN:LxMAX:N,LyMIN:LyMAX:N");
    verify->add_option("--gis-tol", gis_tol, "pass threshold on the transport residual");
    verify->add_option("--cov-tol", cov_tol, "pass threshold on the rotated covariance");
    verify->add_option("--detc-tol", detc_tol, "pass threshold on the detC identity");
    verify->add_option("--config", config_path, "JSON config merged under flags");

    CLI::App* sweep = app.add_subcommand("sweep", "bulk Lambda-plane sweep artifact");
    add_common(sweep, o);
    sweep->add_option("--grid", grid_text, "LxMIN:LxMAX:N,LyMIN:LyMAX:N");
    sweep->add_option("--config", config_path, "JSON config merged under flags");

    CLI::App* bosonic = app.add_subcommand("bosonic", "optical-element unitaries and leakage");
    add_common(bosonic, o);
    bosonic->add_option("--element", element, "phase | beam-splitter | parametric");
    bosonic->add_option("--mode", mode, "a | b (phase shift)");
    bosonic->add_option("--axis", axis, "generator axis 1 | 2");
    bosonic->add_option("--phi", phi, "element parameter");
    bosonic->add_option("--probe", probe, "probe basis index");
    bosonic->add_option("--config", config_path, "JSON config merged under flags");

    // two-pass parse: pull --config first, then feed file values before the
    // user's flags so the command line wins
    std::vector<std::string> raw(argv + 1, argv + argc);
    try {
        std::string cfg;
        for (std::size_t i = 0; i + 1 < raw.size(); ++i)
            if (raw[i] == "--config") cfg = raw[i + 1];
        std::vector<std::string> full;
        if (!raw.empty()) full.push_back(raw.front());  // subcommand name
        if (!cfg.empty()) {
            const auto extra = args_from_config(cfg);
            full.insert(full.end(), extra.begin(), extra.end());
        }
        if (!raw.empty()) full.insert(full.end(), raw.begin() + 1, raw.end());

        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& s : full) cargs.push_back(s.c_str());
        app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));

        if (states->parsed()) {
            if (lambda_text.empty()) throw invalid_input("states needs --lambda");
            return cmd_states(o, lambda_text, srr_tol);
        }
        if (map_cmd->parsed()) return cmd_map(o, kind_text, Lambda_text, grid_text);
        if (verify->parsed()) return cmd_verify(o, grid_text, gis_tol, cov_tol, detc_tol);
        if (sweep->parsed()) return cmd_sweep(o, grid_text);
        if (bosonic->parsed()) return cmd_bosonic(o, element, mode, axis, phi, probe);
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
