#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <utility>

#include "doctest.h"
#include "wkelab/errors.hpp"
#include "wkelab/harness.hpp"

using namespace wkl;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("wkelab_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("fit_exponent") {
    std::vector<Observation> exact;
    for (double x : {8.0, 16.0, 32.0}) exact.push_back({x, 3.0 * std::pow(x, 1.7)});
    const auto r = fit_exponent(exact, 1.7, 0.01);
    CHECK(r.slope == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(std::exp(r.intercept) == doctest::Approx(3.0));
    CHECK(r.pass);

    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    std::vector<Observation> noisy;
    for (double x : {4.0, 8.0, 16.0, 32.0, 64.0}) noisy.push_back({x, std::pow(x, -1.0) * (1 + u(g))});
    CHECK(std::abs(fit_exponent(noisy, -1.0, 0.1).slope + 1.0) < 0.1);

    const auto flat = fit_exponent({{2, 5}, {4, 5}, {8, 5}}, 0.3, 0.0, RegressionReport::Rule::Upper);
    CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12).scale(1));
    CHECK(flat.pass);
    CHECK_FALSE(fit_exponent({{2, 5}, {4, 5}, {8, 5}}, 0.3, 0.1).pass);

    CHECK_THROWS_AS(fit_exponent({{2, 1}, {4, 2}}, 1, 0.1), ValidationError);
    CHECK_THROWS_AS(fit_exponent({{2, 1}, {4, 0}, {8, 3}}, 1, 0.1), ValidationError);
    CHECK_THROWS_AS(fit_exponent({{2, 1}, {2, 2}, {2, 3}}, 1, 0.1), ValidationError);
}

TEST_CASE("CSV layout") {
    CsvTable t({"quantity", "mode"});
    t.add({"x", 8, 2, 8, 0.1}, {"S_t", "(1,0)"}, 0.5, 0.25);
    t.add({"x", 8, 2, 8, 0.1}, {"a\"b", "c"}, 1.0 / 3.0);
    const auto s = t.str();
    CHECK(s.rfind("experiment,L,d,T,alpha,quantity,mode,value,stderr\n", 0) == 0);
    CHECK(s.find("x,8,2,8,0.10000000000000001,S_t,\"(1,0)\",0.5,0.25\n") != std::string::npos);
    CHECK(s.find("\"a\"\"b\",c,0.33333333333333331,0\n") != std::string::npos);
    CHECK(fmt_num(0.1) == "0.10000000000000001");
}

TEST_CASE("run: validation errors write nothing") {
    const auto out = fresh_dir("invalid");
    RunOptions o;
    o.subcommand = "count";
    o.out = out;
    o.config = json{{"beta", {0.5, 1.0}}};
    auto r = run(o);
    CHECK(r.exit_code == kExitValidation);
    CHECK(r.message.find("beta") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    o.config = json{{"L", 8}, {"no_such_key", 1}};
    r = run(o);
    CHECK(r.exit_code == kExitValidation);
    CHECK(r.message.find("no_such_key") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    o.subcommand = "nope";
    o.config = json::object();
    CHECK(run(o).exit_code == kExitValidation);
}

TEST_CASE("run: resource guard") {
    const auto out = fresh_dir("budget");
    RunOptions o;
    o.subcommand = "simulate";
    o.out = out;
    o.config = json{{"L", 8}, {"alpha", 0.1}, {"samples", 16}};
    o.budget = 10.0;
    const auto r = run(o);
    CHECK(r.exit_code == kExitResource);
    const auto m = json::parse(slurp(out / "manifest.json"));
    CHECK(m["status"] == "resource_guard");
    fs::remove_all(out);
}

TEST_CASE("run: simulate without coupling keeps the initial density") {
    const auto out = fresh_dir("sim");
    RunOptions o;
    o.subcommand = "simulate";
    o.out = out;
    o.config = json{{"L", 4}, {"lambda", 0.0}, {"samples", 400}, {"K_max", 1.5}, {"c", 0.5}};
    o.seed = 3;
    const auto r = run(o);
    REQUIRE(r.exit_code == kExitOk);
    const auto m = json::parse(slurp(out / "manifest.json"));
    CHECK(m["seed"] == 3);
    CHECK(m["status"] == "ok");
    CHECK(m["config"]["samples"] == 400);
    CHECK(m["config"]["profile"]["kind"] == "gaussian");
    CHECK(m.contains("version"));

    std::ifstream f(out / "simulate.csv");
    std::string line;
    std::getline(f, line);
    std::map<std::string, double> n_in;
    int checked = 0;
    while (std::getline(f, line)) {
        std::vector<std::string> cols;
        std::string cur;
        bool q = false;
        for (char ch : line) {
            if (ch == '"') q = !q;
            else if (ch == ',' && !q) cols.push_back(std::exchange(cur, {}));
            else cur += ch;
        }
        cols.push_back(cur);
        REQUIRE(cols.size() == 10);
        const double v = std::stod(cols[8]), se = std::stod(cols[9]);
        if (cols[5] == "n_in") n_in[cols[6]] = v;
        else if (cols[5] == "density") {
            CHECK(std::abs(v - n_in.at(cols[6])) < 5 * se + 1e-12);
            ++checked;
        }
    }
    CHECK(checked > 0);
    fs::remove_all(out);
}

TEST_CASE("run: reruns are byte-identical") {
    const auto a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
    RunOptions o;
    o.subcommand = "count";
    o.config = json{{"L_list", {4, 6, 8}}, {"T_exponents", {0.5}}};
    o.out = a;
    REQUIRE(run(o).exit_code == kExitOk);
    o.out = b;
    o.threads = 2;
    REQUIRE(run(o).exit_code == kExitOk);
    CHECK(slurp(a / "count.csv") == slurp(b / "count.csv"));
    CHECK(slurp(a / "count_fits.csv") == slurp(b / "count_fits.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}
