#pragma once

// Verification suites: each case compares a numerical result with an
// independent oracle (closed form, series or stored golden value).

#include <string>
#include <vector>

#include "json.hpp"

namespace hkf {

struct CaseResult {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool upper = true;  ///< value <= bound when true, value >= bound otherwise

    bool pass() const { return upper ? value <= bound : value >= bound; }
};

struct SuiteResult {
    std::string suite;
    std::vector<CaseResult> cases;
    double seconds = 0.0;

    bool pass() const;
    /// Largest value among cases whose name starts with `prefix` (upper-bound cases only).
    double max_value(const std::string& prefix) const;
    /// Smallest value among lower-bound cases whose name starts with `prefix`.
    double min_value(const std::string& prefix) const;
};

/// Suite names in the order "all" runs them.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite name.
SuiteResult run_suite(const std::string& name);

nlohmann::json to_json(const SuiteResult& r);

/// Directory with golden values: $HKF_GOLDEN_DIR, else the source tree's tests/golden.
std::string golden_dir();
/// Value stored under `key` in golden_dir()/values.json.
double golden_value(const std::string& key);

}  // namespace hkf
