#include "hkf/frame.hpp"

#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "hkf/errors.hpp"

using namespace hkf;

namespace {

std::string message_of(double alpha, double beta, RhoMode rho, double a, double b) {
    try {
        make_params(alpha, beta, rho, a, b);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("make_params validates every bound") {
    CHECK(message_of(1.5, 0.5, RhoMode::plain(1), 1, 2).find("0<alpha<1") != std::string::npos);
    CHECK(message_of(0.5, 1.5, RhoMode::plain(1), 1, 2).find("beta") != std::string::npos);
    CHECK(message_of(0.5, 0.5, RhoMode::plain(-1), 1, 2).find("rho") != std::string::npos);
    CHECK(message_of(0.5, 0.5, RhoMode::plain(1), 2, 1).find("a<b") != std::string::npos);
    CHECK_NOTHROW(make_params(0.5, 0.5, RhoMode::plain(1), 0, 1));
    CHECK_THROWS_AS(make_params(0.5, 0.5, RhoMode::plain(0.5), 0, 1), ValidationError);
    CHECK_THROWS_AS(make_params(0.5, 0.5, RhoMode::hadamard(), 0, 1), ValidationError);
}

TEST_CASE("gamma and interpolation targets") {
    const auto p = make_params(0.4, 0.5, RhoMode::plain(2), 1, 2);
    CHECK(p.gamma() == doctest::Approx(0.7));
    CHECK(p.interpolation() == Interpolation::hilfer_katugampola);
    CHECK(make_params(0.4, 0.0, RhoMode::plain(1), 1, 2).interpolation() == Interpolation::riemann_liouville);
    CHECK(make_params(0.4, 1.0, RhoMode::plain(1), 1, 2).interpolation() == Interpolation::caputo);
    CHECK(make_params(0.4, 0.3, RhoMode::plain(1), 1, 2).interpolation() == Interpolation::hilfer);
    CHECK(make_params(0.4, 0.0, RhoMode::plain(3), 1, 2).interpolation() == Interpolation::katugampola);
    CHECK(make_params(0.4, 1.0, RhoMode::plain(3), 1, 2).interpolation() == Interpolation::caputo_katugampola);
    CHECK(make_params(0.4, 0.0, RhoMode::hadamard(), 1, 2).interpolation() == Interpolation::hadamard);
    CHECK(make_params(0.4, 1.0, RhoMode::hadamard(), 1, 2).interpolation() == Interpolation::caputo_hadamard);
    CHECK(make_params(0.4, 0.5, RhoMode::hadamard(), 1, 2).interpolation() == Interpolation::hilfer_hadamard);
    CHECK(to_string(Interpolation::caputo) == "caputo");
}

TEST_CASE("z_of_x special cases and inverse") {
    const auto rl = make_params(0.5, 0.0, RhoMode::plain(1), 1, 2);
    CHECK(z_of_x(rl, 1.75) == 0.75);
    const auto log_kernel = make_params(0.5, 0.0, RhoMode::hadamard(), 1, 3);
    CHECK(z_of_x(log_kernel, 2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    for (auto rho : {RhoMode::plain(0.5), RhoMode::plain(2.0), RhoMode::plain(1e-3), RhoMode::hadamard()}) {
        const auto p = make_params(0.5, 0.5, rho, 1, 2);
        double prev = -1.0;
        for (int k = 0; k <= 200; ++k) {
            const double x = 1.0 + k / 200.0;
            const double z = z_of_x(p, x);
            CHECK(z > prev);
            prev = z;
            CHECK(x_of_z(p, z) == doctest::Approx(x).epsilon(1e-14));
        }
    }
    // Near the Hadamard limit the plain kernel approaches ln(x/a) linearly in rho.
    const auto small = make_params(0.5, 0.5, RhoMode::plain(1e-3), 1, 2);
    CHECK(std::fabs(z_of_x(small, 2.0) - std::log(2.0)) <= 2e-3);
}

TEST_CASE("graded grids") {
    const auto p = make_params(0.4, 0.5, RhoMode::plain(2), 1, 2);
    const auto g = make_graded_grid(p, 100);
    REQUIRE(g->size() == 100);
    CHECK(g->grading() == doctest::Approx(5.0));
    CHECK(g->x(99) == 2.0);
    CHECK(g->z(0) > 0.0);
    for (std::size_t i = 1; i < g->size(); ++i) CHECK(g->z(i) > g->z(i - 1));
    // Doubling n keeps the old nodes.
    const auto fine = make_graded_grid(p, 200);
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(fine->z(2 * i + 1) == doctest::Approx(g->z(i)).epsilon(1e-14));
    CHECK_THROWS_AS(make_graded_grid(p, 1), ValidationError);
    CHECK_THROWS_AS(make_graded_grid(p, 10, 0.5), ValidationError);
    CHECK(default_grading(0.5) == 4.0);
}

TEST_CASE("GridFn helpers") {
    const auto p = make_params(0.5, 0.5, RhoMode::plain(1), 1, 2);
    const auto g = make_graded_grid(p, 16);
    const auto f = power_fn(g, -0.25, 3.0);
    const auto r = rebase(f, 0.25);
    for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(f.value(i) == doctest::Approx(3.0 * std::pow(g->z(i), -0.25)));
        CHECK(r.value(i) == doctest::Approx(f.value(i)));
    }
    CHECK(weighted_norm(zero_fn(g), WeightExponent(0.5)) == 0.0);
    CHECK(weighted_norm(f, WeightExponent(0.25)) == doctest::Approx(3.0));
    CHECK_THROWS_AS(WeightExponent(1.0), ValidationError);
}

TEST_CASE("embedding inequality between weighted norms") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double b : {1.5, 2.0, 3.0}) {
        const auto p = make_params(0.5, 0.5, RhoMode::plain(1), 1, b);
        const auto g = make_graded_grid(p, 64);
        for (int trial = 0; trial < 20; ++trial) {
            GridFn f{g, -0.6, std::vector<double>(g->size())};
            for (auto& v : f.regular) v = u(rng);
            const double mu1 = 0.6, mu2 = 0.8;
            CHECK(weighted_norm(f, WeightExponent(mu2)) <=
                  embedding_bound(mu1, mu2, p) * weighted_norm(f, WeightExponent(mu1)) * (1 + 1e-14));
        }
    }
}
