#include "hkf/analytic.hpp"

#include <cmath>

#include "hkf/errors.hpp"
#include "hkf/operators.hpp"
#include "hkf/specfun.hpp"

namespace hkf {

namespace {

/// Power expansion of v^{alpha-1} E_{alpha,alpha}(lambda v^alpha) = sum_k lambda^k v^{alpha(k+1)-1}/Gamma(alpha(k+1)),
/// truncated once the terms are negligible for v <= z_max.
std::vector<KernelTerm> ml_kernel(double alpha, double lambda, double z_max) {
    std::vector<KernelTerm> terms{{1.0, alpha}};
    if (lambda == 0.0) return terms;
    const double lead = 1.0 / gamma_fn(alpha) * std::pow(z_max, alpha);
    double coefficient = 1.0;
    double prev = lead;
    for (std::size_t k = 1; k < 500; ++k) {
        coefficient *= lambda;
        const double order = alpha * static_cast<double>(k + 1);
        terms.push_back({coefficient, order});
        const double size = std::fabs(coefficient) * std::pow(z_max, order) / gamma_fn(order);
        if (order > 2.0 && size < prev && size <= 1e-17 * lead) return terms;
        prev = size;
    }
    throw ConvergenceError("linear_solution: Mittag-Leffler kernel expansion did not converge");
}

std::vector<double> sample_source(const LinearProblemSpec& spec, const Grid& grid) {
    std::vector<double> f(grid.size(), 0.0);
    if (!spec.source) return f;
    for (std::size_t j = 0; j < grid.size(); ++j) f[j] = spec.source(grid.x(j), grid.z(j));
    return f;
}

double homogeneous_at_z(const LinearProblemSpec& spec, double z) {
    const double g = spec.params.gamma();
    const double alpha = spec.params.alpha();
    return spec.c * std::pow(z, g - 1.0) * ml2({alpha, g, spec.lambda * std::pow(z, alpha)});
}

}  // namespace

double homogeneous_solution(const LinearProblemSpec& spec, double x) {
    if (spec.source) throw ValidationError("homogeneous_solution: source must be the zero function");
    if (!(x > spec.params.a())) throw DomainError("homogeneous_solution: need a<x");
    return homogeneous_at_z(spec, z_of_x(spec.params, x));
}

double linear_solution(const LinearProblemSpec& spec, double x, const SourceQuadrature& quad) {
    const auto& p = spec.params;
    if (!(x > p.a())) throw DomainError("linear_solution: need a<x");
    const double z = z_of_x(p, x);
    double value = spec.c * std::pow(z, p.gamma() - 1.0) *
                   ml2({p.alpha(), p.gamma(), spec.lambda * std::pow(z, p.alpha())});
    if (!spec.source) return value;

    const auto sub = p.with_b(x);
    const double grading = quad.grading > 0.0 ? quad.grading : default_grading(p.alpha());
    const auto grid = make_graded_grid(sub, quad.n, grading);
    const auto kernel = ml_kernel(p.alpha(), spec.lambda, z);
    const auto row = abel_left_row(grid, kernel, 0.0, grid->size() - 1);
    const auto f = sample_source(spec, *grid);
    CompensatedSum s;
    for (std::size_t j = 0; j < row.size(); ++j) s.add(row[j] * f[j]);
    return value + s.value();
}

GridFn linear_solution_on(const LinearProblemSpec& spec, const GridPtr& grid) {
    const auto& p = spec.params;
    const double g = p.gamma();
    GridFn out{grid, g - 1.0, std::vector<double>(grid->size())};
    std::vector<double> integral(grid->size(), 0.0);
    if (spec.source) {
        const auto kernel = ml_kernel(p.alpha(), spec.lambda, grid->z(grid->size() - 1));
        const AbelWeights weights(grid, kernel, 0.0, Side::left);
        integral = weights.apply(sample_source(spec, *grid));
    }
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double z = grid->z(i);
        out.regular[i] = spec.c * ml2({p.alpha(), g, spec.lambda * std::pow(z, p.alpha())}) +
                         std::pow(z, 1.0 - g) * integral[i];
    }
    return out;
}

double power_weighted_solution(const PowerWeightedSpec& spec, double x) {
    const auto& p = spec.params;
    const double alpha = p.alpha();
    if (p.beta() != 0.0) throw ValidationError("power_weighted_solution: requires beta=0");
    if (!(spec.xi > -alpha)) throw ValidationError("power_weighted_solution: xi must satisfy xi>-alpha");
    if (!(x > p.a())) throw DomainError("power_weighted_solution: need a<x");
    const double z = z_of_x(p, x);
    const double l = 1.0 + (spec.xi - 1.0) / alpha;
    const double m = 1.0 + spec.xi / alpha;
    const double e = ml_ks({alpha, l, m, spec.lambda * std::pow(z, alpha + spec.xi)});
    return spec.c / gamma_fn(alpha) * std::pow(z, alpha - 1.0) * e;
}

std::vector<double> cj_coefficients(double alpha, double xi, std::size_t j_max) {
    const double s = alpha + xi;
    if (!(alpha > 0.0)) throw ValidationError("cj_coefficients: alpha must satisfy alpha>0");
    if (!(s > 0.0)) throw ValidationError("cj_coefficients: need alpha+xi>0");
    std::vector<double> c{1.0};
    double log_c = 0.0;
    for (std::size_t r = 1; r <= j_max; ++r) {
        const double rs = static_cast<double>(r) * s;
        log_c += log_gamma(rs) - log_gamma(rs + alpha);
        c.push_back(std::exp(log_c));
    }
    return c;
}

namespace {

/// z^{1-gamma} times the truncated series, which is a polynomial in z^alpha.
double iterate_regular(const LinearProblemSpec& spec, std::size_t k, double z) {
    const auto& p = spec.params;
    const double shift = p.beta() * (1.0 - p.alpha());
    const double za = std::pow(z, p.alpha());
    CompensatedSum s;
    double term = 1.0;  // lambda^{j-1} z^{alpha (j-1)}
    for (std::size_t j = 1; j <= k + 1; ++j) {
        s.add(term / gamma_fn(p.alpha() * static_cast<double>(j) + shift));
        term *= spec.lambda * za;
    }
    return spec.c * s.value();
}

}  // namespace

double homogeneous_iterate(const LinearProblemSpec& spec, std::size_t k, double x) {
    const double z = z_of_x(spec.params, x);
    return std::pow(z, spec.params.gamma() - 1.0) * iterate_regular(spec, k, z);
}

GridFn homogeneous_iterate_on(const LinearProblemSpec& spec, std::size_t k, const GridPtr& grid) {
    GridFn out{grid, spec.params.gamma() - 1.0, std::vector<double>(grid->size())};
    for (std::size_t i = 0; i < grid->size(); ++i) out.regular[i] = iterate_regular(spec, k, grid->z(i));
    return out;
}

}  // namespace hkf
