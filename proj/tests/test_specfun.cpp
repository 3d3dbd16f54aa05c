#include "hkf/specfun.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hkf/errors.hpp"

using namespace hkf;

namespace {

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace

TEST_CASE("log_gamma agrees with the C library") {
    for (double x = 0.05; x < 160.0; x *= 1.37) {
        const double ref = std::lgamma(x);
        CHECK(std::fabs(log_gamma(x) - ref) <= 1e-13 * std::fmax(1.0, std::fabs(ref)));
    }
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
}

TEST_CASE("gamma_fn is exact at small integers") {
    double factorial = 1.0;
    for (int k = 1; k <= 20; ++k) {
        CHECK(gamma_fn(k) == factorial);
        factorial *= k;
    }
    CHECK(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)) <= 1e-14);
}

TEST_CASE("ml2 spot values") {
    CHECK(rel(ml2({1.0, 1.0, 1.0}), std::exp(1.0)) <= 1e-15);
    CHECK(rel(ml2({2.0, 1.0, 1.0}), std::cosh(1.0)) <= 1e-15);
    CHECK(rel(ml1(2.0, -1.0), std::cos(1.0)) <= 1e-14);
    for (double beta : {0.3, 1.0, 2.7}) CHECK(rel(ml2({0.7, beta, 0.0}), 1.0 / std::tgamma(beta)) <= 1e-13);
    // Stored golden value for E_{0.5,0.5}(0.3).
    CHECK(rel(ml2({0.5, 0.5, 0.3}), 1.000314353400585958986116) <= 1e-15);
}

TEST_CASE("ml2 closed forms") {
    // E_{1/2}(x) = exp(x^2) erfc(-x), E_{1,2}(x) = (e^x - 1)/x
    for (double x : {-2.0, -1.0, -0.5, 0.3, 1.0, 2.0}) {
        CHECK(rel(ml1(0.5, x), std::exp(x * x) * std::erfc(-x)) <= 1e-12);
        CHECK(rel(ml2({1.0, 2.0, x}), std::expm1(x) / x) <= 1e-14);
    }
}

TEST_CASE("ml2 is increasing on the positive axis") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> a(0.5, 1.9), b(0.2, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = a(rng), beta = b(rng);
        double prev = ml2({alpha, beta, 0.0});
        for (double x = 0.25; x <= 5.0; x += 0.25) {
            const double v = ml2({alpha, beta, x});
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("ml2 does not depend on the term cap once converged") {
    SeriesLimits doubled;
    doubled.max_terms *= 2;
    for (double alpha : {0.5, 0.8, 1.4})
        for (double x : {-3.0, 0.5, 20.0}) CHECK(ml2({alpha, 1.3, x}) == ml2({alpha, 1.3, x}, doubled));
}

TEST_CASE("ml2 refuses arguments outside its regime") {
    CHECK_THROWS_AS(ml2({0.5, 1.0, 51.0}), DomainError);
    CHECK_THROWS_AS(ml2({0.5, 1.0, -12.0}), DomainError);  // catastrophic cancellation
    CHECK_THROWS_AS(ml2({0.1, 1.0, 10.0}), ConvergenceError);  // far outside the series regime
    CHECK_THROWS_AS(ml2({0.0, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(ml2({0.5, -1.0, 1.0}), ValidationError);
    SeriesLimits tiny;
    tiny.max_terms = 5;
    CHECK_THROWS_AS(ml2({1.0, 1.0, 1.0}, tiny), ConvergenceError);
}

TEST_CASE("ml_ks reduces to known functions") {
    // alpha = 1, l = 0, m = 1 gives c_k = 1/k!.
    for (double x : {-2.0, 0.5, 3.0}) CHECK(rel(ml_ks({1.0, 0.0, 1.0, x}), std::exp(x)) <= 1e-13);
    // m = 1 telescopes to a two-parameter function.
    for (double alpha : {0.3, 0.8})
        for (double l : {0.5, 2.0})
            for (double x : {-1.5, 1.5}) {
                const double two = std::tgamma(alpha * l + 1.0) * ml2({alpha, alpha * l + 1.0, x});
                CHECK(rel(ml_ks({alpha, l, 1.0, x}), two) <= 1e-10);
            }
    CHECK(ml_ks({0.5, 1.0, 2.0, 0.0}) == 1.0);
}

TEST_CASE("ks_coefficients") {
    const auto c = ks_coefficients(1.0, 0.0, 1.0, 6);
    REQUIRE(c.size() == 7);
    double factorial = 1.0;
    for (int k = 0; k <= 6; ++k) {
        if (k > 0) factorial *= k;
        CHECK(rel(c[k], 1.0 / factorial) <= 1e-13);
    }
}

TEST_CASE("ml_ks rejects gamma poles") {
    // alpha(jm+l)+1 = -1 at j = 0.
    CHECK_THROWS_AS(ml_ks({1.0, -2.0, 1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(ml_ks({1.0, 1.0, 0.0, 0.5}), ValidationError);
}

TEST_CASE("CompensatedSum keeps small addends") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) s.add(1e-16);
    CHECK(std::fabs(s.value() - (1.0 + 1e-13)) <= 1e-16);
}
