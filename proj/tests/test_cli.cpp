#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(IST_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("states solves the spin-1 example with three records") {
    const RunResult r =
        run_cli("states --algebra su2 --j 1 --pair J1J2 --lambda 0.6 --format csv");
    CHECK(r.exit_code == 0);
    int lines = 0;
    for (char c : r.output)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // header + three states
    CHECK(r.output.find("-0.8") != std::string::npos);
}

TEST_CASE("states at lambda 0 reports vanishing var_a") {
    const RunResult r = run_cli("states --algebra su2 --j 0.5 --pair J1J2 --lambda 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"var_a\": 0.0") != std::string::npos);
}

TEST_CASE("map examples match the prescriptions") {
    {
        const RunResult r = run_cli("map --kind circular --Lambda 0.8+0.6i --format csv");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("0.5,0.78539816339744") != std::string::npos);  // lambda, phi = pi/4
    }
    {
        const RunResult r = run_cli("map --kind circular --Lambda 0.3 --format csv");
        CHECK(r.exit_code == 0);
        // lambda = 0.3 (17 significant digits), phi = 0
        CHECK(r.output.find(",0.29999999999999999,0,") != std::string::npos);
    }
    {
        const RunResult r = run_cli("map --kind hyperbolic --Lambda 0.5i --format csv");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("0,0.549306144334") != std::string::npos);  // tanh phi = 0.5
    }
}

TEST_CASE("map flags the hyperbolic boundary but exits zero") {
    const RunResult r = run_cli("map --kind hyperbolic --Lambda i --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("boundary") != std::string::npos);
}

TEST_CASE("sweep has the pinned header and one row per grid point") {
    const RunResult r =
        run_cli("sweep --algebra su2 --j 1 --pair J1J2 --grid=-1:1:3,-1:1:3 --format csv");
    CHECK(r.exit_code == 0);
    const std::string header = "Lx,Ly,phi,lambda,roundtrip_err,gis_residual,detC_err,cov_after_rotation\n";
    CHECK(r.output.substr(0, header.size()) == header);
    int lines = 0;
    for (char c : r.output)
        if (c == '\n') ++lines;
    CHECK(lines == 10);  // header + 9 rows
}

TEST_CASE("sweep output is byte-identical across runs") {
    const std::string args =
        "sweep --algebra su2 --j 1.5 --pair J1J2 --grid=-2:2:4,-2:2:4 --format csv --out ";
    const RunResult r1 = run_cli(args + "/tmp/ist_sweep_a.csv");
    const RunResult r2 = run_cli(args + "/tmp/ist_sweep_b.csv");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const std::string a = slurp("/tmp/ist_sweep_a.csv");
    const std::string b = slurp("/tmp/ist_sweep_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("verify passes on a small su(2) grid") {
    const RunResult r = run_cli("verify --algebra su2 --j 1.5 --pair J1J2 --grid=-2:2:5,-2:2:5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("bosonic reports leakage for the parametric element") {
    const RunResult r = run_cli(
        "bosonic --algebra su11-single --parity even --cutoff 64 --element parametric --axis 2 "
        "--phi 0.5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("cutoff_doubling_delta") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("states --algebra su2 --j 1 --pair J1J2").exit_code == 2);  // no lambda
    CHECK(run_cli("states --algebra su9 --lambda 1").exit_code == 2);
    CHECK(run_cli("states --algebra su2 --j 0.7 --pair J1J2 --lambda 0").exit_code == 2);
    CHECK(run_cli("map --kind circular").exit_code == 2);  // no Lambda/grid
    CHECK(run_cli("states --algebra su2 --j 1 --pair J1J2 --lambda 0 --rtol=-1").exit_code == 2);
    CHECK(run_cli("sweep --algebra su2 --j 1 --pair J1J2 --grid=-1:1:3,-1:1:3 --out /nonexistent/x.csv")
              .exit_code == 2);
    CHECK(run_cli("states --algebra su2 --j 1 --pair J1J2 --lambda 1+2x").exit_code == 2);
}

TEST_CASE("numeric failures exit 3") {
    // parametric amplification too strong for a small cutoff
    const RunResult r = run_cli(
        "bosonic --algebra su11-single --parity even --cutoff 16 --element parametric --axis 2 "
        "--phi 1.8");
    CHECK(r.exit_code == 3);
}

TEST_CASE("config file merges under flags") {
    {
        std::ofstream f("/tmp/ist_config.json");
        f << R"({"algebra": "su2", "j": 1.0, "pair": "J1J2", "lambda": "0.6", "format": "csv"})";
    }
    const RunResult file_only = run_cli("states --config /tmp/ist_config.json");
    CHECK(file_only.exit_code == 0);
    int lines = 0;
    for (char c : file_only.output)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // j = 1 from the file
    // flag overrides the file value
    const RunResult overridden = run_cli("states --config /tmp/ist_config.json --j 1.5");
    CHECK(overridden.exit_code == 0);
    int lines2 = 0;
    for (char c : overridden.output)
        if (c == '\n') ++lines2;
    CHECK(lines2 == 5);  // j = 1.5 has four branches
}

TEST_CASE("complex literals parse across their forms") {
    for (const char* lit : {"0.5", "0.5i", "-0.3i", "1+2i", "1-2i", "i", "-i", "1.5e-1+2e-1i"}) {
        const RunResult r = run_cli(std::string("map --kind circular --Lambda ") + lit);
        CHECK(r.exit_code == 0);
    }
}
