#include "hkf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hkf/errors.hpp"
#include "hkf/frame.hpp"

namespace hkf {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {"alpha", "beta", "rho",  "a",   "b",         "c",
                                          "lambda", "source", "xi", "n",   "grading",   "tol",
                                          "max_iters", "lipschitz"};

double number(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing required key \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(std::string("key \"") + key + "\" must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(std::string("key \"") + key + "\" must be finite");
    return d;
}

std::optional<double> optional_number(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    return number(j, key);
}

std::size_t count(const json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ConfigError(std::string("key \"") + key + "\" must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

RhoMode rho_from(const json& j) {
    if (!j.contains("rho")) throw ConfigError("missing required key \"rho\"");
    const auto& v = j.at("rho");
    if (v.is_string()) {
        if (v.get<std::string>() == "hadamard") return RhoMode::hadamard();
        throw ConfigError("key \"rho\" must be a number or \"hadamard\"");
    }
    return RhoMode::plain(number(j, "rho"));
}

}  // namespace

ProblemConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!kKnownKeys.count(key)) throw ConfigError("unknown key \"" + key + "\"");
        if (value.is_object() || value.is_array())
            throw ConfigError("key \"" + key + "\" must be a scalar");
    }

    std::string source_text = "0";
    if (j.contains("source")) {
        if (!j.at("source").is_string()) throw ConfigError("key \"source\" must be a string");
        source_text = j.at("source").get<std::string>();
    }

    try {
        ProblemConfig c{make_params(number(j, "alpha"), number(j, "beta"), rho_from(j), number(j, "a"),
                                    number(j, "b")),
                        number(j, "c"),
                        number(j, "lambda"),
                        SourceExpr::parse(source_text),
                        optional_number(j, "xi"),
                        count(j, "n", 1024),
                        optional_number(j, "grading"),
                        j.contains("tol") ? number(j, "tol") : 1e-10,
                        count(j, "max_iters", 500),
                        optional_number(j, "lipschitz")};
        if (c.n < 2) throw ConfigError("key \"n\" violates n>=2");
        if (c.grading && !(*c.grading >= 1.0)) throw ConfigError("key \"grading\" violates grading>=1");
        if (!(c.tol > 0.0)) throw ConfigError("key \"tol\" violates tol>0");
        if (c.lipschitz && !(*c.lipschitz > 0.0)) throw ConfigError("key \"lipschitz\" violates lipschitz>0");
        if (c.xi && !(*c.xi >= 0.0)) throw ConfigError("key \"xi\" violates xi>=0");
        return c;
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("key \"source\": ") + e.what());
    }
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ProblemConfig& c) {
    const auto& p = c.params;
    json j;
    j["alpha"] = p.alpha();
    j["beta"] = p.beta();
    if (p.rho_mode().is_hadamard()) {
        j["rho"] = "hadamard";
    } else {
        j["rho"] = p.rho_mode().rho();
    }
    j["a"] = p.a();
    j["b"] = p.b();
    j["c"] = c.c;
    j["lambda"] = c.lambda;
    j["source"] = c.source.to_string();
    if (c.xi) j["xi"] = *c.xi;
    j["n"] = c.n;
    if (c.grading) j["grading"] = *c.grading;
    j["tol"] = c.tol;
    j["max_iters"] = c.max_iters;
    if (c.lipschitz) j["lipschitz"] = *c.lipschitz;
    return j;
}

CauchyProblem make_problem(const ProblemConfig& c) {
    Rhs::Source source;
    if (!c.source.is_zero_literal()) {
        source = [expr = c.source](double x, double z) { return expr.eval(x, z); };
    } else {
        source = [](double, double) { return 0.0; };
    }
    Rhs rhs = c.xi ? Rhs::power_weighted(c.lambda, *c.xi, source) : Rhs::linear(c.lambda, source);
    return CauchyProblem{c.params, std::move(rhs), c.c, c.lipschitz};
}

SolverConfig make_solver_config(const ProblemConfig& c) {
    SolverConfig s;
    s.n = c.n;
    s.grading = c.grading;
    s.tol = c.tol;
    s.max_iters = c.max_iters;
    return s;
}

}  // namespace hkf
