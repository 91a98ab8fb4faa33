#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string cli() { return PSS_CLI_PATH; }

int run(const std::string& args) {
    int rc = std::system((cli() + " " + args).c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("verify exits 0 and writes a passing report") {
    REQUIRE(run("verify --kmax 3 --report /tmp/pss_cli_verify.json > /dev/null") == 0);
    auto j = nlohmann::json::parse(slurp("/tmp/pss_cli_verify.json"));
    CHECK(j["schema"] == "pss-report-v1");
    CHECK(j["pass"] == true);
    CHECK(j["checks"].size() > 30);
    for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
}

TEST_CASE("solve writes a snapshot CSV and metadata") {
    REQUIRE(run("solve --n 64 --t-end 0.1 --ic 1:0.05:0 --out /tmp/pss_cli_s.csv "
                "--meta /tmp/pss_cli_s.json") == 0);
    auto meta = nlohmann::json::parse(slurp("/tmp/pss_cli_s.json"));
    CHECK(meta["n"] == 64);
    CHECK(meta["t"].get<double>() == doctest::Approx(0.1));
    std::string csv = slurp("/tmp/pss_cli_s.csv");
    CHECK(csv.rfind("x,u,u_x,u_xx,u_t", 0) == 0);
}

TEST_CASE("solve is deterministic: identical bytes on rerun") {
    REQUIRE(run("solve --n 64 --t-end 0.1 --out /tmp/pss_cli_d1.csv") == 0);
    REQUIRE(run("solve --n 64 --t-end 0.1 --out /tmp/pss_cli_d2.csv") == 0);
    CHECK(slurp("/tmp/pss_cli_d1.csv") == slurp("/tmp/pss_cli_d2.csv"));
}

TEST_CASE("monitor passes the default tolerance on a smooth run") {
    CHECK(run("monitor --n 128 --t-end 0.2 --family neg --k 2 --k 3 "
              "--report /tmp/pss_cli_m.json > /dev/null") == 0);
    auto j = nlohmann::json::parse(slurp("/tmp/pss_cli_m.json"));
    for (const auto& c : j["checks"]) {
        CHECK(c["pass"] == true);
        CHECK(std::abs(c["residual"].get<double>()) <= 1e-6);
    }
}

TEST_CASE("immerse closed-form branch: Gauss column is -1 to round-off") {
    REQUIRE(run("immerse --C 5 --beta 1 --out /tmp/pss_cli_i.csv") == 0);
    std::ifstream is("/tmp/pss_cli_i.csv");
    std::string line;
    std::getline(is, line);  // parameter header comment
    CHECK(line.rfind("# {", 0) == 0);
    std::getline(is, line);
    CHECK(line == "x,a,b,c,H,gauss");
    int rows = 0;
    while (std::getline(is, line)) {
        std::istringstream fields(line);
        std::string cell;
        double gauss = 0.0;
        for (int col = 0; std::getline(fields, cell, ','); ++col)
            if (col == 5) gauss = std::stod(cell);
        CHECK(std::abs(gauss + 1.0) <= 1e-10);
        ++rows;
    }
    CHECK(rows == 257);
}

TEST_CASE("bad parameters and bad usage exit with code 2") {
    CHECK(run("immerse --mu 1 --beta 0 > /dev/null 2>&1") == 2);
    CHECK(run("immerse --C 1 --beta 1 > /dev/null 2>&1") == 2);  // C^2 <= 4 beta^2
    CHECK(run("bogus-subcommand > /dev/null 2>&1") == 2);
    CHECK(run("solve --n 100 > /dev/null 2>&1") == 2);  // not a power of two
}

TEST_CASE("degeneracy guard stop exits with code 3") {
    CHECK(run("immerse --mu 1 --beta 1 --b0 0.9 --span -2 > /dev/null 2>&1") == 3);
}
