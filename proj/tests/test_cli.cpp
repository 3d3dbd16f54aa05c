#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hkf/cli.hpp"
#include "hkf/config.hpp"
#include "hkf/errors.hpp"
#include "hkf/expr.hpp"
#include "hkf/specfun.hpp"
#include "hkf/verify.hpp"

using namespace hkf;
namespace fs = std::filesystem;

namespace {

std::size_t parse_offset(const std::string& text) {
    try {
        SourceExpr::parse(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    return std::string::npos;
}

/// Random tree over the full grammar, built as text.
std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 2);
    static const char* functions[] = {"exp", "ln", "sin", "cos", "sqrt", "abs"};
    switch (pick(rng)) {
        case 0: return "x";
        case 1: return "z";
        case 2: return std::to_string(std::uniform_int_distribution<int>(0, 99)(rng)) + ".25e-1";
        case 3: return "-(" + random_expr(rng, depth - 1) + ")";
        case 4: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
        case 6: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
        case 7: return random_expr(rng, depth - 1) + " / " + random_expr(rng, depth - 1);
        case 8: return random_expr(rng, depth - 1) + " ^ " + random_expr(rng, depth - 1);
        default:
            return std::string(functions[std::uniform_int_distribution<int>(0, 5)(rng)]) + "(" +
                   random_expr(rng, depth - 1) + ")";
    }
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hkf_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& contents = "") const {
        const auto p = (path / name).string();
        if (!contents.empty()) std::ofstream(p) << contents;
        return p;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::string& header) {
    std::ifstream in(path);
    std::getline(in, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(in, line);) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    return code;
}

}  // namespace

TEST_CASE("parser examples") {
    CHECK(SourceExpr::parse("0").is_zero_literal());
    CHECK(SourceExpr::parse("2*x + exp(-z)").eval(2.0, 1.0) == doctest::Approx(4.3678794412));
    CHECK(SourceExpr::parse("x ^ 2 ^ 3").eval(2.0, 0.0) == 256.0);
    CHECK(SourceExpr::parse("-x ^ 2").eval(3.0, 0.0) == 9.0);  // unary minus binds to the base
    CHECK(SourceExpr::parse("\xE2\x88\x92" "1 \xE2\x88\x92 x").eval(2.0, 0.0) == -3.0);
    CHECK(SourceExpr::parse("sqrt(abs(ln(x)))*cos(0)+sin(0)").eval(std::exp(4.0), 0.0) == doctest::Approx(2.0));
    CHECK(SourceExpr::parse("1.5e2 / (x - 1)").eval(4.0, 0.0) == 50.0);
}

TEST_CASE("parser errors carry offsets") {
    CHECK(parse_offset("1 + ") == 4);
    CHECK(parse_offset("2 * (x") == 6);
    CHECK(parse_offset("foo(x)") == 0);
    CHECK(parse_offset("x + y") == 4);
    CHECK(parse_offset("x $ 2") == 2);
    CHECK(parse_offset("") == 0);
    try {
        SourceExpr::parse("1 + tan(x)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("tan") != std::string::npos);
    }
}

TEST_CASE("printer and parser are inverse") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const auto text = random_expr(rng, 5);
        const auto once = SourceExpr::parse(text);
        const auto twice = SourceExpr::parse(once.to_string());
        CHECK_MESSAGE(once.root() == twice.root(), text);
        CHECK(twice.to_string() == once.to_string());
    }
    const auto neg = SourceExpr::parse("-(-x)");
    CHECK(SourceExpr::parse(neg.to_string()).root() == neg.root());
}

TEST_CASE("config validation") {
    using nlohmann::json;
    const json good = {{"alpha", 0.5}, {"beta", 0.5}, {"rho", "hadamard"}, {"a", 1}, {"b", 2},
                       {"c", 1},       {"lambda", -1}, {"source", "x"}};
    const auto c = config_from_json(good);
    CHECK(c.params.rho_mode().is_hadamard());
    CHECK(c.n == 1024);
    CHECK(config_from_json(config_to_json(c)).source.to_string() == "x");
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));

    auto with = [&](const char* key, json value) {
        auto j = good;
        j[key] = value;
        return j;
    };
    CHECK_THROWS_AS(config_from_json(with("alpha", 1.5)), ConfigError);
    CHECK_THROWS_AS(config_from_json(with("extra", 1)), ConfigError);
    CHECK_THROWS_AS(config_from_json(with("rho", "log")), ConfigError);
    CHECK_THROWS_AS(config_from_json(with("n", 1.5)), ConfigError);
    CHECK_THROWS_AS(config_from_json(with("source", "x +")), ConfigError);
    CHECK_THROWS_AS(config_from_json(with("tol", -1)), ConfigError);
    auto missing = good;
    missing.erase("lambda");
    CHECK_THROWS_AS(config_from_json(missing), ConfigError);
    try {
        config_from_json(with("alpha", 1.5));
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("0<alpha<1") != std::string::npos);
    }
}

TEST_CASE("ml command") {
    std::string out;
    CHECK(run({"ml", "--alpha", "2", "--x", "1"}, &out) == 0);
    CHECK(out == "1.5430806348152437\n");
    CHECK(run({"ml", "--alpha", "1", "--beta", "1", "--x", "1"}, &out) == 0);
    CHECK(std::stod(out) == doctest::Approx(std::exp(1.0)).epsilon(1e-16));
    CHECK(run({"ml", "--alpha", "0.5", "--beta", "0.5", "--x", "0.3"}, &out) == 0);
    CHECK(std::stod(out) == doctest::Approx(golden_value("ml2_0.5_0.5_0.3")).epsilon(1e-15));
    CHECK(run({"ml", "--alpha", "0.5", "--x", "100"}) == 2);
    CHECK(run({"ml", "--alpha", "0.5"}) == 1);
    CHECK(run({"ml", "--alpha", "abc", "--x", "1"}) == 1);
    CHECK(run({}) == 1);
    CHECK(run({"ks", "--alpha", "1", "--l", "0", "--m", "1", "--x", "1"}, &out) == 0);
    CHECK(std::stod(out) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("solve command") {
    TempDir dir;
    const auto config = dir.file("h.json", R"({"alpha":0.6,"beta":0.5,"rho":2,"a":1,"b":2,"c":1,
        "lambda":-1,"source":"0","n":256})");

    SUBCASE("csv output") {
        const auto csv = dir.file("out.csv");
        CHECK(run({"solve", "--config", config, "--out", csv}) == 0);
        std::string header;
        const auto rows = read_csv(csv, header);
        CHECK(header == "x,z,phi,weighted_phi");
        CHECK(rows.size() == 256);
        const auto p = make_params(0.6, 0.5, RhoMode::plain(2), 1, 2);
        for (const auto& r : rows) {
            CHECK(r[3] == doctest::Approx(std::pow(r[1], 1.0 - p.gamma()) * r[2]).epsilon(1e-12));
            CHECK(std::fabs(r[3] - ml2({0.6, p.gamma(), -std::pow(r[1], 0.6)})) <= 5e-4);
        }
        // Deterministic output.
        const auto again = dir.file("again.csv");
        CHECK(run({"solve", "--config", config, "--out", again}) == 0);
        CHECK(slurp(csv) == slurp(again));
    }

    SUBCASE("json report re-validates") {
        const auto out = dir.file("out.json");
        CHECK(run({"solve", "--config", config, "--out", out, "--format", "json"}) == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j["status"] == "converged");
        CHECK_NOTHROW(config_from_json(j["config"]));
        CHECK(j["breakpoints"].size() == j["contraction_factors"].size());
        CHECK(j["residual_history"].size() == j["breakpoints"].size());
        CHECK(j["solution"]["phi"].size() == 256);
    }

    SUBCASE("lambda = 0 gives a constant weighted solution") {
        const auto zero = dir.file("z.json", R"({"alpha":0.3,"beta":0.2,"rho":1,"a":1,"b":2,"c":2,
            "lambda":0,"source":"0","n":64})");
        const auto csv = dir.file("z.csv");
        CHECK(run({"solve", "--config", zero, "--out", csv}) == 0);
        std::string header;
        const double gamma = 0.3 + 0.2 * 0.7;
        for (const auto& r : read_csv(csv, header)) CHECK(r[3] == doctest::Approx(2.0 / std::tgamma(gamma)));
    }

    SUBCASE("errors") {
        const auto bad = dir.file("bad.json", R"({"alpha":1.5,"beta":0.5,"rho":1,"a":1,"b":2,"c":1,"lambda":-1})");
        CHECK(run({"solve", "--config", bad, "--out", dir.file("x.csv")}) == 1);
        CHECK(run({"solve", "--config", dir.file("missing.json"), "--out", dir.file("x.csv")}) == 1);
        const auto slow = dir.file("slow.json", R"({"alpha":0.5,"beta":0.5,"rho":1,"a":1,"b":2,"c":1,
            "lambda":-1,"max_iters":2,"n":64})");
        const auto out = dir.file("slow.json.out");
        CHECK(run({"solve", "--config", slow, "--out", out, "--format", "json"}) == 3);
        CHECK(nlohmann::json::parse(slurp(out))["status"] == "not_converged");
    }
}

TEST_CASE("verify command") {
    std::string out;
    CHECK(run({"verify", "--suite", "kilbas-saigo"}, &out) == 0);
    auto j = nlohmann::json::parse(out);
    CHECK(j["pass"] == true);
    CHECK(j["suites"][0]["summary"]["max_telescoping_error"].get<double>() <= 1e-10);

    CHECK(run({"verify", "--suite", "power-rule"}, &out) == 0);
    j = nlohmann::json::parse(out);
    CHECK(j["suites"][0]["summary"]["max_relative_error"].get<double>() <= 1e-4);

    CHECK(run({"verify", "--suite", "nope"}) == 1);
}
