#include "hkf/analytic.hpp"

#include <cmath>

#include "doctest.h"
#include "hkf/errors.hpp"
#include "hkf/operators.hpp"
#include "hkf/specfun.hpp"

using namespace hkf;

TEST_CASE("homogeneous solution") {
    const auto p = make_params(0.4, 0.5, RhoMode::plain(2), 1, 2);
    const double z = z_of_x(p, 1.6);
    CHECK(homogeneous_solution({p, 0.0, 2.0, {}}, 1.6) ==
          doctest::Approx(2.0 * std::pow(z, p.gamma() - 1.0) / std::tgamma(p.gamma())));
    // gamma = 1 with a = 0 gives E_{0.5,1}(1).
    const auto q = make_params(0.5, 1.0, RhoMode::plain(1), 0, 1);
    CHECK(homogeneous_solution({q, 1.0, 1.0, {}}, 1.0) == doctest::Approx(5.008980080762283466).epsilon(1e-14));
    CHECK_THROWS_AS(homogeneous_solution({p, 1.0, 1.0, [](double, double) { return 1.0; }}, 1.5), ValidationError);
    // Initial-condition limit.
    const double x = x_of_z(p, 1e-12);
    CHECK(std::pow(1e-12, 1.0 - p.gamma()) * homogeneous_solution({p, -1.0, 3.0, {}}, x) * std::tgamma(p.gamma()) ==
          doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("linear solution with a source") {
    const auto p = make_params(0.5, 0.0, RhoMode::plain(1), 1, 2);
    const LinearProblemSpec forced{p, -1.0, 0.0, [](double, double) { return 1.0; }};
    // Stored golden value; the closed form is z^alpha E_{alpha,alpha+1}(-z^alpha).
    CHECK(linear_solution(forced, 2.0) == doctest::Approx(0.5724164238441929956).epsilon(1e-8));
    CHECK(linear_solution(forced, 1.5) ==
          doctest::Approx(std::pow(0.5, 0.5) * ml2({0.5, 1.5, -std::pow(0.5, 0.5)})).epsilon(1e-8));

    // lambda = 0 reduces to the c-term plus J^alpha of the source.
    const LinearProblemSpec free{p, 0.0, 1.0, [](double, double z) { return z; }};
    const double z = 0.8;
    CHECK(linear_solution(free, 1.8) ==
          doctest::Approx(std::pow(z, -0.5) / std::tgamma(0.5) + std::pow(z, 1.5) / std::tgamma(2.5)).epsilon(1e-8));

    // No source: identical to the homogeneous form.
    const LinearProblemSpec none{p, -1.0, 1.0, {}};
    CHECK(linear_solution(none, 1.3) == homogeneous_solution(none, 1.3));
}

TEST_CASE("linear solution on a grid") {
    const auto p = make_params(0.5, 0.0, RhoMode::plain(1), 1, 2);
    const auto g = make_graded_grid(p, 256);
    const LinearProblemSpec forced{p, -1.0, 0.5, [](double, double) { return 1.0; }};
    const auto sol = linear_solution_on(forced, g);
    CHECK(sol.sigma == doctest::Approx(-0.5));
    for (std::size_t i = g->size() / 2; i < g->size(); i += 16)
        CHECK(sol.value(i) == doctest::Approx(linear_solution(forced, g->x(i))).epsilon(1e-6));
}

TEST_CASE("power-weighted solution") {
    // xi = 0 is the homogeneous problem with beta = 0.
    for (double alpha : {0.3, 0.6, 0.9}) {
        const auto p = make_params(alpha, 0.0, RhoMode::plain(1.5), 1, 2);
        for (double x : {1.1, 1.5, 2.0})
            CHECK(power_weighted_solution({p, -0.7, 0.0, 2.0}, x) ==
                  doctest::Approx(homogeneous_solution({p, -0.7, 2.0, {}}, x)).epsilon(1e-8));
    }
    const auto hilfer = make_params(0.5, 0.5, RhoMode::plain(1), 1, 2);
    CHECK_THROWS_AS(power_weighted_solution({hilfer, 1.0, 1.0, 1.0}, 1.5), ValidationError);
}

TEST_CASE("cj coefficients match the Kilbas-Saigo product") {
    for (double alpha : {0.3, 0.7})
        for (double xi : {0.0, 0.5, 2.0}) {
            const auto c = cj_coefficients(alpha, xi, 8);
            const auto k = ks_coefficients(alpha, 1.0 + (xi - 1.0) / alpha, 1.0 + xi / alpha, 8);
            for (std::size_t j = 0; j < c.size(); ++j) CHECK(c[j] == doctest::Approx(k[j]).epsilon(1e-12));
        }
}

TEST_CASE("power-weighted solution satisfies its Volterra equation") {
    // phi = c/Gamma(alpha) z^{alpha-1} + J^alpha (lambda z^xi phi)
    const double alpha = 0.6, xi = 0.8, lambda = -1.2, c = 1.0;
    const auto p = make_params(alpha, 0.0, RhoMode::plain(1), 1, 2);
    const auto g = make_graded_grid(p, 1024);
    GridFn phi{g, alpha - 1.0, std::vector<double>(g->size())};
    GridFn rhs{g, alpha - 1.0 + xi, std::vector<double>(g->size())};
    for (std::size_t i = 0; i < g->size(); ++i) {
        phi.regular[i] = std::pow(g->z(i), 1.0 - alpha) * power_weighted_solution({p, lambda, xi, c}, g->x(i));
        rhs.regular[i] = lambda * phi.regular[i];
    }
    const auto J = gfi_left(rhs, alpha);
    double worst = 0.0;
    for (std::size_t i = g->size() / 20; i < g->size(); ++i) {
        const double residual = phi.value(i) - c / std::tgamma(alpha) * std::pow(g->z(i), alpha - 1.0) - J.value(i);
        worst = std::fmax(worst, std::fabs(residual));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("truncated iterates converge to the solution") {
    const auto p = make_params(0.5, 0.5, RhoMode::plain(1), 1, 2);
    const LinearProblemSpec spec{p, -1.0, 1.0, {}};
    CHECK(homogeneous_iterate(spec, 0, 1.5) ==
          doctest::Approx(std::pow(0.5, p.gamma() - 1.0) / std::tgamma(p.gamma())));
    CHECK(homogeneous_iterate(spec, 60, 1.5) == doctest::Approx(homogeneous_solution(spec, 1.5)).epsilon(1e-13));
}
