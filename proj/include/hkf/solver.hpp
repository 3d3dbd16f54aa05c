#pragma once

// Picard solver for the Cauchy problem
//
//     D^{alpha,beta} phi = f(x, phi),   (J^{1-gamma} phi)(a+) = c,
//
// through its Volterra form phi = c/Gamma(gamma) z^{gamma-1} + J^alpha f(., phi).
// (a, b] is split into subintervals on which the Picard map is a contraction;
// each subinterval is iterated to tolerance with the history integral over
// earlier subintervals folded into its starting function.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hkf/errors.hpp"
#include "hkf/frame.hpp"

namespace hkf {

/// Right-hand side f(x, phi). Callables also receive z = z(x), which stays
/// exact where x itself rounds to a.
class Rhs {
  public:
    using Fn = std::function<double(double x, double z, double phi)>;
    using Source = std::function<double(double x, double z)>;

    /// lambda * phi + source(x)
    static Rhs linear(double lambda, Source source);
    /// lambda * z^xi * phi + source(x)
    static Rhs power_weighted(double lambda, double xi, Source source);
    /// Arbitrary f; its Lipschitz constant has to be supplied or estimated.
    static Rhs general(Fn fn);

    double operator()(double x, double z, double phi) const { return fn_(x, z, phi); }

    /// Known Lipschitz constant on z in (0, z_max], when the form is structural.
    std::optional<double> exact_lipschitz(double z_max) const;

  private:
    Fn fn_;
    std::optional<double> lambda_;
    double xi_ = 0.0;
};

struct CauchyProblem {
    HKParams params;
    Rhs rhs;
    double c = 0.0;
    std::optional<double> lipschitz;
};

struct SolverConfig {
    std::size_t n = 1024;
    std::optional<double> grading;  ///< default max(1, 2/alpha)
    double tol = 1e-10;             ///< stopping tolerance in the C_{1-gamma,rho} norm
    std::size_t max_iters = 500;
    double theta = 0.5;             ///< target contraction factor per subinterval
};

struct SolveReport {
    GridFn solution;                  ///< carries sigma = gamma - 1
    double lipschitz = 0.0;           ///< A actually used
    std::vector<double> breakpoints;  ///< x_1 < ... < x_M = b
    std::vector<double> contraction_factors;
    std::vector<std::vector<double>> residual_history;  ///< per subinterval, per iteration
    std::vector<std::size_t> iterations;
};

/// Thrown when a subinterval does not reach tolerance; carries the partial report.
class SolveConvergenceError : public ConvergenceError {
  public:
    SolveConvergenceError(const std::string& what, SolveReport report)
        : ConvergenceError(what), report_(std::move(report)) {}
    const SolveReport& report() const noexcept { return report_; }

  private:
    SolveReport report_;
};

/// w = A Gamma(gamma)/Gamma(alpha+gamma) (z(x1))^alpha.
double contraction_factor(double lipschitz, const HKParams& p, double x1);

/// Same factor for a subinterval of z-length `dz`.
double contraction_factor_dz(double lipschitz, const HKParams& p, double dz);

/// Greedy left-to-right breakpoints (in x) with factor theta on every subinterval
/// but the last. Throws DomainError when more than 1e6 subintervals are needed.
std::vector<double> split_interval(double lipschitz, const HKParams& p, const SolverConfig& config);

/// Sampled Lipschitz estimate inflated by 1.5, or the exact constant for structural rhs.
double lipschitz_estimate(const CauchyProblem& problem, std::size_t samples = 1000);

SolveReport picard_solve(const CauchyProblem& problem, const SolverConfig& config = {});

/// Unsplit global iterates phi_0 .. phi_k on the whole interval, phi_0 = c/Gamma(gamma) z^{gamma-1}.
std::vector<GridFn> picard_iterates(const CauchyProblem& problem, const SolverConfig& config,
                                    std::size_t k_max);

/// residual_k <= w^{k-1} residual_1 (1 + slack) + floor on every subinterval.
bool satisfies_geometric_decay(const SolveReport& report, double slack, double floor);

}  // namespace hkf
