#pragma once

// Problem configuration for the command-line solver: a flat JSON object.

#include <cstddef>
#include <optional>
#include <string>

#include "json.hpp"

#include "hkf/expr.hpp"
#include "hkf/frame.hpp"
#include "hkf/solver.hpp"

namespace hkf {

struct ProblemConfig {
    HKParams params;
    double c = 0.0;
    double lambda = 0.0;
    SourceExpr source;
    std::optional<double> xi;  ///< present: rhs is lambda z^xi phi + source
    std::size_t n = 1024;
    std::optional<double> grading;
    double tol = 1e-10;
    std::size_t max_iters = 500;
    std::optional<double> lipschitz;
};

/// Validates every key; unknown keys and out-of-range values raise ConfigError.
ProblemConfig config_from_json(const nlohmann::json& j);
ProblemConfig load_config(const std::string& path);

/// Canonical JSON form; config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ProblemConfig& c);

CauchyProblem make_problem(const ProblemConfig& c);
SolverConfig make_solver_config(const ProblemConfig& c);

}  // namespace hkf
