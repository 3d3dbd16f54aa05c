#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage or config error,
// 2 domain error, 3 convergence failure or verification failure.

#include <iosfwd>
#include <string>
#include <vector>

#include "hkf/solver.hpp"

namespace hkf {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_domain = 2, exit_failure = 3 };

/// Runs the `hkf` command line; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_ml(double alpha, double beta, double x, std::ostream& out, std::ostream& err);
int cmd_ks(double alpha, double l, double m, double x, std::ostream& out, std::ostream& err);
/// format is "csv" or "json".
int cmd_solve(const std::string& config_path, const std::string& out_path, const std::string& format,
              std::ostream& err);
/// suite is a name from suite_names() or "all". The JSON report goes to `out`.
int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err);

/// Shortest text with 17 significant digits, as printed by every command.
std::string format_real(double v);

}  // namespace hkf
