#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// End-to-end checks of the oscidos binary (path via OSCIDOS_CLI).

namespace {

struct RunResult {
    int code;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("OSCIDOS_CLI");
    REQUIRE(p != nullptr);
    return p;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), int(buf.size()), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(tok);
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(bool(is));
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("").code == 2);
    CHECK(run("partition --phi -1 --rho 1").code == 2);
    CHECK(run("partition --phi 1.6 --rho 1").code == 2);   // phi >= pi/2
    CHECK(run("density --phi 0 --out /tmp/zz").code == 2);  // module precondition
    CHECK(run("partition --rho-range 2:1:5 --phi 0.1").code == 2);
    const auto r = run("partition --phi -1 --rho 1");
    CHECK(r.out.find("phi") != std::string::npos);  // message cites the precondition
}

TEST_CASE("numeric failures exit with code 3") {
    // l_max far below 2 gamma rho: the product tail cannot certify
    CHECK(run("partition --phi 0.3 --rho 1 --gamma 1000 --lmax 10").code == 3);
}

TEST_CASE("partition table: phi = 0 rows collapse") {
    const auto r = run("partition --phi 0 --gamma 10 --rho 1");
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 2);
    const auto cols = split(lines[1], ',');
    REQUIRE(cols.size() == 6);
    const double z0 = std::stod(cols[1]);
    const double zc = std::stod(cols[2]);
    const double zf = std::stod(cols[3]);
    CHECK(std::abs(zc / z0 - 1.0) < 1e-10);
    CHECK(std::abs(zf / z0 - 1.0) < 1e-10);
}

TEST_CASE("partition: closed form vs Binet per row") {
    const auto r = run("partition --phi 0.3 --gamma 100 --rho-range 0.5:2:3");
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 4);
    for (int i = 1; i <= 3; ++i) {
        const auto cols = split(lines[i], ',');
        REQUIRE(cols.size() == 6);
        const double zf = std::stod(cols[3]);
        const double lb = std::stod(cols[4]);
        CHECK(std::abs(std::exp(lb) / zf - 1.0) < 1e-9);
    }
}

TEST_CASE("density outputs are deterministic and well-formed") {
    const std::string prefix = "/tmp/oscidos_cli_density";
    const std::string args =
        "density --phi 0.25 --tmax 12.5 --dt 0.01 --terms 6 --out " + prefix;
    REQUIRE(run(args).code == 0);
    const std::string first = slurp(prefix + "_rho.csv");
    REQUIRE(run(args).code == 0);
    CHECK(first == slurp(prefix + "_rho.csv"));  // byte-identical rerun

    const auto rho_lines = split(first, '\n');
    CHECK(rho_lines[0] == "t,rho");
    const auto first_row = split(rho_lines[1], ',');
    CHECK(std::stod(first_row[1]) == doctest::Approx(0.5 * std::sin(0.25)).epsilon(1e-12));

    const auto lines_csv = split(slurp(prefix + "_lines.csv"), '\n');
    CHECK(lines_csv[0] == "j,omega_j,gamma_j,mass,peak_height");
    const auto line1 = split(lines_csv[1], ',');
    CHECK(std::stod(line1[3]) == doctest::Approx(3.0));  // exact binomial mass

    CHECK(slurp(prefix + "_phi.csv").find("omega") == 0);
    CHECK(!slurp(prefix + "_residual.csv").empty());
}

TEST_CASE("lorentz table lists widths and masses") {
    const auto r = run("lorentz --phi 0.2 --jmax 3");
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 4);
    const auto row2 = split(lines[2], ',');
    CHECK(std::stod(row2[2]) == doctest::Approx(2.0 * 2.0 * std::sin(0.2)).epsilon(1e-12));
    CHECK(std::stod(row2[4]) == doctest::Approx(6.0));
}

TEST_CASE("discretize summarizes the lattice model") {
    const auto r = run("discretize --phi 0.3 --gamma 1.5 --n 2 --rho 1 --l 1 --format json");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("renorm") != std::string::npos);
    CHECK(r.out.find("rel_frobenius_gap") != std::string::npos);
}

TEST_CASE("transform reports the Laplace round trip") {
    const auto r = run("transform --phi 0.3 --rho-range 1:2:2 --tmax 40 --dt 0.01 --terms 25");
    REQUIRE(r.code == 0);
    const auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 3);
    for (int i = 1; i <= 2; ++i) {
        const auto cols = split(lines[i], ',');
        REQUIRE(cols.size() == 4);
        CHECK(std::stod(cols[3]) < 1e-2);  // rel gap
    }
    CHECK(r.out.find("complete monotonicity") != std::string::npos);
    CHECK(r.out.find("pass") != std::string::npos);
}

TEST_CASE("verify subcommand: subset runs and reports") {
    const std::string report = "/tmp/oscidos_cli_verify.json";
    const auto r = run("verify --only 7 --only 10 --out " + report);
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    const std::string doc = slurp(report);
    CHECK(doc.find("\"schema\": \"oscidos/1\"") != std::string::npos);
    CHECK(doc.find("coefficient-identities") != std::string::npos);
    CHECK(doc.find("\"measured\"") != std::string::npos);
    CHECK(doc.find("\"bound\"") != std::string::npos);
}
