#include "hkf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hkf/operators.hpp"
#include "hkf/specfun.hpp"

namespace hkf {

namespace {

constexpr std::size_t kMaxSubintervals = 1'000'000;

double weight_coefficient(const HKParams& p) {
    return std::exp(log_gamma(p.gamma()) - log_gamma(p.alpha() + p.gamma()));
}

/// Evaluates the rhs at a node, attaching the location to any failure.
double eval_rhs(const Rhs& rhs, double x, double z, double phi) {
    double v;
    try {
        v = rhs(x, z, phi);
    } catch (const std::exception& e) {
        std::ostringstream os;
        os << "rhs evaluation failed at x = " << x << " (z = " << z << "): " << e.what();
        throw Error(os.str());
    }
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "rhs evaluation produced " << v << " at x = " << x << " (z = " << z
           << ", phi = " << phi << ")";
        throw DomainError(os.str());
    }
    return v;
}

void validate_config(const SolverConfig& config) {
    if (!(config.tol > 0.0)) throw ValidationError("solver: tol must satisfy tol>0");
    if (!(config.theta > 0.0 && config.theta < 1.0))
        throw ValidationError("solver: theta must satisfy 0<theta<1");
    if (config.max_iters == 0) throw ValidationError("solver: max_iters must satisfy max_iters>=1");
}

/// Shared state of one discretized Volterra equation.
struct Discretization {
    GridPtr grid;
    AbelWeights weights;
    double phi0;                     ///< c / Gamma(gamma), the regular part of phi_0
    std::vector<double> lift;        ///< z_i^{1-gamma}
    std::vector<double> singular;    ///< z_i^{gamma-1}

    Discretization(const CauchyProblem& problem, const SolverConfig& config)
        : grid(make_graded_grid(problem.params, config.n,
                                config.grading.value_or(default_grading(problem.params.alpha())))),
          weights(grid, std::array{KernelTerm{1.0, problem.params.alpha()}},
                  problem.params.gamma() - 1.0, Side::left),
          phi0(problem.c / gamma_fn(problem.params.gamma())) {
        const double g = problem.params.gamma();
        lift.resize(grid->size());
        singular.resize(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            lift[i] = std::pow(grid->z(i), 1.0 - g);
            singular[i] = std::pow(grid->z(i), g - 1.0);
        }
    }

    /// Regular part (sigma = gamma - 1) of f(x_j, phi_j) at node j.
    double rhs_regular(const Rhs& rhs, std::size_t j, double phi_regular) const {
        const double phi = singular[j] * phi_regular;
        return lift[j] * eval_rhs(rhs, grid->x(j), grid->z(j), phi);
    }

    /// sum_{j in [from, to]} W(i, j) * values_j
    double partial_row(std::size_t i, std::size_t from, std::size_t to,
                       std::span<const double> values) const {
        const auto w = weights.row(i);
        CompensatedSum s;
        for (std::size_t j = from; j <= to; ++j) s.add(w[j] * values[j]);
        return s.value();
    }
};

}  // namespace

Rhs Rhs::linear(double lambda, Source source) {
    Rhs r;
    r.lambda_ = lambda;
    r.fn_ = [lambda, source = std::move(source)](double x, double z, double phi) {
        return lambda * phi + source(x, z);
    };
    return r;
}

Rhs Rhs::power_weighted(double lambda, double xi, Source source) {
    Rhs r;
    r.lambda_ = lambda;
    r.xi_ = xi;
    r.fn_ = [lambda, xi, source = std::move(source)](double x, double z, double phi) {
        return lambda * std::pow(z, xi) * phi + source(x, z);
    };
    return r;
}

Rhs Rhs::general(Fn fn) {
    Rhs r;
    r.fn_ = std::move(fn);
    return r;
}

std::optional<double> Rhs::exact_lipschitz(double z_max) const {
    if (!lambda_) return std::nullopt;
    if (xi_ < 0.0) throw ValidationError("rhs: power weight needs xi>=0 for a Lipschitz bound");
    return std::fabs(*lambda_) * (xi_ == 0.0 ? 1.0 : std::pow(z_max, xi_));
}

double contraction_factor_dz(double lipschitz, const HKParams& p, double dz) {
    if (!(lipschitz >= 0.0)) throw ValidationError("contraction_factor: need A>=0");
    if (!(dz >= 0.0)) throw ValidationError("contraction_factor: need a nonnegative z-length");
    return lipschitz * weight_coefficient(p) * std::pow(dz, p.alpha());
}

double contraction_factor(double lipschitz, const HKParams& p, double x1) {
    if (!(x1 > p.a() && x1 <= p.b()))
        throw ValidationError("contraction_factor: x1 must satisfy a<x1<=b");
    return contraction_factor_dz(lipschitz, p, z_of_x(p, x1));
}

std::vector<double> split_interval(double lipschitz, const HKParams& p, const SolverConfig& config) {
    validate_config(config);
    if (!(lipschitz >= 0.0)) throw ValidationError("split_interval: need A>=0");
    const double z_end = z_of_x(p, p.b());
    const double scale = lipschitz * weight_coefficient(p);
    if (scale * std::pow(z_end, p.alpha()) <= config.theta) return {p.b()};

    // Solve scale * dz^alpha = theta for the subinterval z-length.
    const double dz = std::pow(config.theta / scale, 1.0 / p.alpha());
    const double count = std::ceil(z_end / dz);
    if (!(count <= static_cast<double>(kMaxSubintervals))) {
        std::ostringstream os;
        os << "split_interval: " << count << " subintervals needed (limit " << kMaxSubintervals
           << "); Lipschitz constant " << lipschitz << " is too large";
        throw DomainError(os.str());
    }
    std::vector<double> breakpoints;
    breakpoints.reserve(static_cast<std::size_t>(count));
    for (std::size_t k = 1;; ++k) {
        const double z = static_cast<double>(k) * dz;
        if (z >= z_end) break;
        breakpoints.push_back(x_of_z(p, z));
    }
    breakpoints.push_back(p.b());
    return breakpoints;
}

double lipschitz_estimate(const CauchyProblem& problem, std::size_t samples) {
    if (samples < 100) throw ValidationError("lipschitz_estimate: samples must satisfy samples>=100");
    const auto& p = problem.params;
    const double z_end = z_of_x(p, p.b());
    if (auto exact = problem.rhs.exact_lipschitz(z_end)) return *exact;

    const double box = std::max(1.0, 4.0 * std::fabs(problem.c) / gamma_fn(p.gamma()));
    std::mt19937_64 rng(0x5eed1234u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double slope = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double z = z_end * (1.0 - unit(rng));  // (0, z_end]
        const double x = std::clamp(x_of_z(p, z), p.a(), p.b());
        const double phi1 = box * (2.0 * unit(rng) - 1.0);
        // Alternate close pairs (local slope) and spread pairs.
        const double phi2 = (s % 2 == 0) ? phi1 + 1e-4 * box : box * (2.0 * unit(rng) - 1.0);
        if (phi1 == phi2) continue;
        const double f1 = eval_rhs(problem.rhs, x, z, phi1);
        const double f2 = eval_rhs(problem.rhs, x, z, phi2);
        slope = std::max(slope, std::fabs(f1 - f2) / std::fabs(phi1 - phi2));
    }
    return 1.5 * slope;
}

SolveReport picard_solve(const CauchyProblem& problem, const SolverConfig& config) {
    validate_config(config);
    const auto& p = problem.params;
    SolveReport report;
    report.lipschitz = problem.lipschitz.value_or(lipschitz_estimate(problem));
    if (!(report.lipschitz >= 0.0)) throw ValidationError("picard_solve: lipschitz must satisfy A>0");
    report.breakpoints = split_interval(report.lipschitz, p, config);

    const Discretization disc(problem, config);
    const auto& grid = *disc.grid;
    const std::size_t n = grid.size();
    std::vector<double> phi(n, disc.phi0);  // regular parts, sigma = gamma - 1
    std::vector<double> f_reg(n, 0.0);

    std::size_t start = 0;
    double z_left = 0.0;
    for (std::size_t k = 0; k < report.breakpoints.size(); ++k) {
        const bool last = k + 1 == report.breakpoints.size();
        const double z_right = last ? grid.z(n - 1) : z_of_x(p, report.breakpoints[k]);
        report.contraction_factors.push_back(
            contraction_factor_dz(report.lipschitz, p, z_right - z_left));
        std::size_t end = start;
        while (end < n && (last || grid.z(end) <= z_right)) ++end;
        report.residual_history.emplace_back();
        report.iterations.push_back(0);
        z_left = z_right;
        if (end == start) continue;

        // Known function on this subinterval: phi_0 plus the history integral.
        std::vector<double> known(end - start);
        for (std::size_t i = start; i < end; ++i) {
            const double history = start == 0 ? 0.0 : disc.partial_row(i, 0, start - 1, f_reg);
            known[i - start] = disc.phi0 + disc.lift[i] * history;
            phi[i] = known[i - start];
        }

        auto& residuals = report.residual_history.back();
        bool converged = false;
        for (std::size_t it = 1; it <= config.max_iters; ++it) {
            for (std::size_t j = start; j < end; ++j) f_reg[j] = disc.rhs_regular(problem.rhs, j, phi[j]);
            double residual = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const double next = known[i - start] + disc.lift[i] * disc.partial_row(i, start, i, f_reg);
                residual = std::max(residual, std::fabs(next - phi[i]));
                phi[i] = next;
            }
            residuals.push_back(residual);
            report.iterations.back() = it;
            if (residual <= config.tol) {
                converged = true;
                break;
            }
        }
        // Freeze f at the accepted iterate for the history of later subintervals.
        for (std::size_t j = start; j < end; ++j) f_reg[j] = disc.rhs_regular(problem.rhs, j, phi[j]);
        if (!converged) {
            report.solution = GridFn{disc.grid, p.gamma() - 1.0, phi};
            std::ostringstream os;
            os << "picard_solve: subinterval " << k + 1 << " ending at x = " << report.breakpoints[k]
               << " did not reach tol " << config.tol << " in " << config.max_iters
               << " iterations (last residual " << residuals.back() << ")";
            throw SolveConvergenceError(os.str(), std::move(report));
        }
        start = end;
    }
    report.solution = GridFn{disc.grid, p.gamma() - 1.0, std::move(phi)};
    return report;
}

std::vector<GridFn> picard_iterates(const CauchyProblem& problem, const SolverConfig& config,
                                    std::size_t k_max) {
    validate_config(config);
    const Discretization disc(problem, config);
    const std::size_t n = disc.grid->size();
    const double sigma = problem.params.gamma() - 1.0;
    std::vector<GridFn> iterates;
    iterates.push_back(power_fn(disc.grid, sigma, disc.phi0));
    std::vector<double> f_reg(n);
    for (std::size_t k = 1; k <= k_max; ++k) {
        const auto& prev = iterates.back().regular;
        for (std::size_t j = 0; j < n; ++j) f_reg[j] = disc.rhs_regular(problem.rhs, j, prev[j]);
        const auto integral = disc.weights.apply(f_reg);
        GridFn next{disc.grid, sigma, std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) next.regular[i] = disc.phi0 + disc.lift[i] * integral[i];
        iterates.push_back(std::move(next));
    }
    return iterates;
}

bool satisfies_geometric_decay(const SolveReport& report, double slack, double floor) {
    for (std::size_t s = 0; s < report.residual_history.size(); ++s) {
        const auto& r = report.residual_history[s];
        if (r.empty()) continue;
        const double w = report.contraction_factors[s];
        if (!(w < 1.0)) return false;
        double bound = r.front();
        for (std::size_t k = 1; k < r.size(); ++k) {
            bound *= w;
            if (r[k] > bound * (1.0 + slack) + floor) return false;
        }
    }
    return true;
}

}  // namespace hkf
