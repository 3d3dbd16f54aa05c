#include "hkf/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "hkf/config.hpp"
#include "hkf/errors.hpp"
#include "hkf/specfun.hpp"
#include "hkf/verify.hpp"

namespace hkf {

using nlohmann::json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json report_to_json(const ProblemConfig& config, const SolveReport& report, const std::string& status) {
    json j;
    j["config"] = config_to_json(config);
    j["status"] = status;
    j["gamma"] = config.params.gamma();
    j["interpolation"] = to_string(config.params.interpolation());
    j["lipschitz"] = report.lipschitz;
    j["breakpoints"] = report.breakpoints;
    j["contraction_factors"] = report.contraction_factors;
    j["residual_history"] = report.residual_history;
    j["iterations"] = report.iterations;
    const auto& s = report.solution;
    json x = json::array(), z = json::array(), phi = json::array(), weighted = json::array();
    if (s.grid) {
        for (std::size_t i = 0; i < s.grid->size(); ++i) {
            x.push_back(s.grid->x(i));
            z.push_back(s.grid->z(i));
            phi.push_back(s.value(i));
            weighted.push_back(s.regular[i]);
        }
    }
    j["solution"] = {{"x", x}, {"z", z}, {"phi", phi}, {"weighted_phi", weighted}};
    return j;
}

void write_csv(std::ostream& os, const SolveReport& report) {
    os << "x,z,phi,weighted_phi\n";
    const auto& s = report.solution;
    if (!s.grid) return;
    for (std::size_t i = 0; i < s.grid->size(); ++i) {
        // The solution carries sigma = gamma - 1, so its regular part is z^{1-gamma} phi.
        os << format_real(s.grid->x(i)) << ',' << format_real(s.grid->z(i)) << ','
           << format_real(s.value(i)) << ',' << format_real(s.regular[i]) << '\n';
    }
}

bool write_report(const std::string& path, const std::string& format, const ProblemConfig& config,
                  const SolveReport& report, const std::string& status, std::ostream& err) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        err << "error: cannot write " << path << '\n';
        return false;
    }
    if (format == "json") {
        os << report_to_json(config, report, status).dump(2) << '\n';
    } else {
        write_csv(os, report);
    }
    return static_cast<bool>(os);
}

}  // namespace

int cmd_ml(double alpha, double beta, double x, std::ostream& out, std::ostream& err) {
    try {
        out << format_real(ml2({alpha, beta, x})) << '\n';
        return exit_ok;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

int cmd_ks(double alpha, double l, double m, double x, std::ostream& out, std::ostream& err) {
    try {
        out << format_real(ml_ks({alpha, l, m, x})) << '\n';
        return exit_ok;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

int cmd_solve(const std::string& config_path, const std::string& out_path, const std::string& format,
              std::ostream& err) {
    if (format != "csv" && format != "json") {
        err << "error: format must be csv or json\n";
        return exit_usage;
    }
    std::optional<ProblemConfig> config;
    try {
        config = load_config(config_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    try {
        const auto report = picard_solve(make_problem(*config), make_solver_config(*config));
        return write_report(out_path, format, *config, report, "converged", err) ? exit_ok : exit_usage;
    } catch (const SolveConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        write_report(out_path, format, *config, e.report(), "not_converged", err);
        return exit_failure;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names;
    if (suite == "all") {
        names = suite_names();
    } else {
        bool known = false;
        for (const auto& n : suite_names()) known = known || n == suite;
        if (!known) {
            err << "error: unknown suite \"" << suite << "\"\n";
            return exit_usage;
        }
        names.push_back(suite);
    }
    json report;
    report["suites"] = json::array();
    bool pass = true;
    for (const auto& name : names) {
        const auto r = run_suite(name);
        pass = pass && r.pass();
        report["suites"].push_back(to_json(r));
        err << name << ": " << (r.pass() ? "pass" : "FAIL") << '\n';
    }
    report["pass"] = pass;
    out << report.dump(2) << '\n';
    return pass ? exit_ok : exit_failure;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hilfer-Katugampola fractional calculus toolkit", "hkf"};
    app.require_subcommand(1);

    double alpha = 0.0, beta = 1.0, x = 0.0, l = 0.0, m = 0.0;
    auto* ml = app.add_subcommand("ml", "Evaluate the Mittag-Leffler function E_{alpha,beta}(x)");
    ml->add_option("--alpha", alpha, "order alpha > 0")->required();
    ml->add_option("--beta", beta, "second parameter beta > 0 (default 1)");
    ml->add_option("--x", x, "argument")->required();

    auto* ks = app.add_subcommand("ks", "Evaluate the Kilbas-Saigo function E_{alpha,l,m}(x)");
    ks->add_option("--alpha", alpha, "alpha > 0")->required();
    ks->add_option("--l", l, "l")->required();
    ks->add_option("--m", m, "m > 0")->required();
    ks->add_option("--x", x, "argument")->required();

    std::string config_path, out_path, format = "csv";
    auto* solve = app.add_subcommand("solve", "Solve a Cauchy problem described by a JSON config");
    solve->add_option("--config", config_path, "config file")->required();
    solve->add_option("--out", out_path, "output file")->required();
    solve->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run verification suites and print a JSON report");
    std::vector<std::string> choices = suite_names();
    choices.push_back("all");
    verify->add_option("--suite", suite, "suite name or all")->check(CLI::IsMember(choices));

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        // Prints help for --help and a usage message otherwise.
        return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
    }

    if (ml->parsed()) return cmd_ml(alpha, beta, x, out, err);
    if (ks->parsed()) return cmd_ks(alpha, l, m, x, out, err);
    if (solve->parsed()) return cmd_solve(config_path, out_path, format, err);
    return cmd_verify(suite, out, err);
}

}  // namespace hkf
