// End-to-end checks of the command-line tool: exit codes, output schemas and
// determinism.

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
    int exit_code = -1;
    std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path() / "zerofree-cli-test";
    std::filesystem::create_directories(dir);
    const auto out = dir / "stdout", err = dir / "stderr";
    const std::string cmd = std::string(ZEROFREE_CLI_PATH) + " --cache-dir " + (dir / "cache").string() + " " +
                            args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (!l.empty()) v.push_back(l);
    return v;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> v;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) v.push_back(std::strtod(f.c_str(), nullptr));
    return v;
}

std::filesystem::path write_lattice(const std::string& name, const std::string& json) {
    const auto p = std::filesystem::temp_directory_path() / ("zerofree-cli-" + name + ".json");
    std::ofstream(p) << json;
    return p;
}

double cdf_closed(double c) { return 2 * c / std::numbers::pi * std::sin(std::numbers::pi / (2 * c)); }

}  // namespace

TEST_CASE("cdf: default grid, schema and values") {
    const auto r = run("cdf");
    REQUIRE(r.exit_code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 401);
    CHECK(l[0] == "c,cdf,abs_err_est");
    const auto first = fields(l[1]), last = fields(l.back());
    CHECK(first[0] == 0.505);
    CHECK(last[0] == 2.5);
    CHECK(std::abs(first[1] - cdf_closed(0.505)) < 1e-12);
    CHECK(std::abs(last[1] - cdf_closed(2.5)) < 1e-12);
    const auto tail = run("cdf --c 0.8 1.5 --residue-tail --n-max 100");
    REQUIRE(tail.exit_code == 0);
    const auto t = lines(tail.out);
    CHECK(t[0] == "c,cdf,abs_err_est,residue_tail");
    for (std::size_t i = 1; i < t.size(); ++i) {
        const auto f = fields(t[i]);
        CHECK(std::abs(f[1] + f[3] - 1) < 1e-6);
    }
}

TEST_CASE("density: both methods agree") {
    const auto r = run("density --c 0.6 1.0 1.7 --method both");
    REQUIRE(r.exit_code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0] == "c,f_c,method,abs_err_est,discrepancy");
    for (std::size_t i = 1; i < l.size(); ++i) {
        CHECK(l[i].find(",both,") != std::string::npos);
        CHECK(fields(l[i])[4] < 1e-6);
    }
}

TEST_CASE("poles: CSV header and row count") {
    const auto r = run("poles --a 2 --n-max 5");
    REQUIRE(r.exit_code == 0);
    std::ifstream frozen(std::string(ZEROFREE_TEST_DATA) + "/poles_a2_n5.csv");
    std::ostringstream want;
    want << frozen.rdbuf();
    CHECK(r.out == want.str());
    const auto sweep = run("poles --sweep 1.9 2.0 0.05 --n-max 3");
    REQUIRE(sweep.exit_code == 0);
    CHECK(lines(sweep.out).size() == 1 + 3 * 4);
}

TEST_CASE("montecarlo and constants are deterministic") {
    const std::string args = "montecarlo --samples 50 --seed 3 --grid 0.6 1.2 0.2 --threads 2";
    const auto a = run(args), b = run(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["n_samples"] == 50);
    CHECK(j["seed"] == 3);
    CHECK(j["c_grid"].size() == 4);
    CHECK(j["wide_uncertainty"].get<bool>());
    const auto c = run("constants");
    REQUIRE(c.exit_code == 0);
    CHECK(c.out == run("constants").out);
    const auto k = nlohmann::json::parse(c.out);
    CHECK(std::abs(k["K1"].get<double>() - 4 * std::numbers::pi * std::numbers::pi) < 1e-8);
    CHECK(std::abs(k["K2"].get<double>() - std::numbers::pi * std::numbers::pi / 12) < 1e-10);
    CHECK(k["err_estimates"].contains("K1"));
}

TEST_CASE("sigma-lattice: finite, degenerate and missing inputs") {
    const auto sheared = run("sigma-lattice " + write_lattice("sheared", R"({"dimension":2,"basis":[[1,0],[0.3,1]]})").string());
    REQUIRE(sheared.exit_code == 0);
    const auto j = nlohmann::json::parse(sheared.out);
    CHECK(std::abs(j["sigma_tilde"].get<double>() - 3.683656699887823) < 1e-9);
    CHECK(j["status"] == "ok");
    const auto z2 = run("sigma-lattice " + write_lattice("z2", R"({"dimension":2,"basis":[[1,0],[0,1]]})").string());
    REQUIRE(z2.exit_code == 0);
    const auto k = nlohmann::json::parse(z2.out);
    CHECK(k["sigma_tilde"] == "inf");
    CHECK(k["status"] == "MultipleMinima");
    const auto missing = run("sigma-lattice /nonexistent/lattice.json");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("cannot read") != std::string::npos);
}

TEST_CASE("nu: synthetic curve and usage errors") {
    const auto r = run("nu --synthetic 6 --sigma-min 0 --sigma-max 0.5 --sigma-step 0.25 --check-shift 1.5");
    REQUIRE(r.exit_code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0] == "sigma,nu,err_estimate");
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(fields(l[i])[1] >= -1e-6);
    const auto report = nlohmann::json::parse(lines(r.err).at(0));
    CHECK(report["max_residual"].get<double>() < 1e-6);
    CHECK(run("nu --synthetic 4").exit_code == 2);
    CHECK(run("nu --synthetic 6 --sigma-step 0").exit_code == 2);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("cdf --step 0").exit_code == 2);
    CHECK(run("cdf --c 0.4").exit_code == 2);
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("poles --a 0.5").exit_code == 2);
}
