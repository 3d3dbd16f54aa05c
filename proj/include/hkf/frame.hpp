#pragma once

// Parameter bundle, kernel coordinate z = (x^rho - a^rho)/rho, graded grids
// and the weighted sup norms of C_{mu,rho}[a,b].

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hkf {

/// Kernel exponent: a plain rho > 0, or the logarithmic (Hadamard) limit rho -> 0+.
class RhoMode {
  public:
    static RhoMode plain(double rho) { return RhoMode(false, rho); }
    static RhoMode hadamard() { return RhoMode(true, 0.0); }

    bool is_hadamard() const noexcept { return hadamard_; }
    /// Only meaningful in plain mode.
    double rho() const noexcept { return rho_; }

  private:
    RhoMode(bool hadamard, double rho) : hadamard_(hadamard), rho_(rho) {}
    bool hadamard_;
    double rho_;
};

/// Which classical derivative the parameter choice reduces to.
enum class Interpolation {
    hilfer_katugampola,  ///< generic alpha, beta, rho
    katugampola,         ///< beta = 0
    caputo_katugampola,  ///< beta = 1
    hilfer,              ///< rho = 1, 0 < beta < 1
    riemann_liouville,   ///< rho = 1, beta = 0
    caputo,              ///< rho = 1, beta = 1
    hilfer_hadamard,     ///< Hadamard limit, 0 < beta < 1
    hadamard,            ///< Hadamard limit, beta = 0
    caputo_hadamard,     ///< Hadamard limit, beta = 1
};

std::string to_string(Interpolation target);

/// Order alpha, type beta, kernel exponent rho and interval [a, b].
/// Immutable; construct with make_params.
class HKParams {
  public:
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    /// gamma = alpha + beta (1 - alpha).
    double gamma() const noexcept { return gamma_; }
    const RhoMode& rho_mode() const noexcept { return rho_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    Interpolation interpolation() const noexcept { return target_; }

    /// Same kernel and order, different right endpoint.
    HKParams with_b(double b) const;

  private:
    friend HKParams make_params(double, double, RhoMode, double, double);
    HKParams() = default;
    double alpha_ = 0.0, beta_ = 0.0, gamma_ = 0.0;
    RhoMode rho_ = RhoMode::plain(1.0);
    double a_ = 0.0, b_ = 0.0;
    Interpolation target_ = Interpolation::hilfer_katugampola;
};

/// Validates 0 < alpha < 1, 0 <= beta <= 1, rho > 0, a >= 0 (a = 0 only for a plain
/// rho >= 1), a < b. Throws ValidationError naming the violated bound.
HKParams make_params(double alpha, double beta, RhoMode rho, double a, double b);

/// z(x) = (x^rho - a^rho)/rho, or ln(x/a) in the Hadamard limit. Requires a <= x <= b.
double z_of_x(const HKParams& p, double x);
/// Inverse of z_of_x for 0 <= z <= z(b).
double x_of_z(const HKParams& p, double z);

/// Graded mesh on (a, b]: z_i = z(b) (i/n)^grading, i = 1..n. The node x = a is excluded.
class Grid {
  public:
    const HKParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return z_.size(); }
    double grading() const noexcept { return grading_; }
    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> z() const noexcept { return z_; }
    double x(std::size_t i) const { return x_[i]; }
    double z(std::size_t i) const { return z_[i]; }

  private:
    friend std::shared_ptr<const Grid> make_graded_grid(const HKParams&, std::size_t, double);
    Grid(HKParams p, double grading) : params_(std::move(p)), grading_(grading) {}
    HKParams params_;
    double grading_;
    std::vector<double> x_;
    std::vector<double> z_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// max(1, 2/alpha): compensates z^{alpha-1}-type behaviour at a.
double default_grading(double alpha);

/// Requires n >= 2 and grading >= 1. The last node is b exactly.
GridPtr make_graded_grid(const HKParams& p, std::size_t n, double grading);
GridPtr make_graded_grid(const HKParams& p, std::size_t n);

/// Grid function z^sigma * regular(z), sampled at the grid nodes.
struct GridFn {
    GridPtr grid;
    double sigma = 0.0;
    std::vector<double> regular;

    /// Value of the represented function at node i.
    double value(std::size_t i) const;
    std::vector<double> values() const;
};

/// Function identically zero, represented with the given singular exponent.
GridFn zero_fn(GridPtr grid, double sigma = 0.0);
/// z^sigma * c.
GridFn power_fn(GridPtr grid, double sigma, double c = 1.0);
/// Same function, re-expressed with singular exponent `sigma`.
GridFn rebase(const GridFn& f, double sigma);

/// Exponent mu of the weight z^mu; 0 <= mu < 1.
class WeightExponent {
  public:
    explicit WeightExponent(double mu);
    double mu() const noexcept { return mu_; }

  private:
    double mu_;
};

/// max_i |z_i^mu f(x_i)| over the grid nodes.
double weighted_norm(const GridFn& f, WeightExponent w);

/// Factor B = (z(b))^{mu2 - mu1} with ||f||_{mu2} <= B ||f||_{mu1}. Requires mu1 <= mu2, a != 0.
double embedding_bound(double mu1, double mu2, const HKParams& p);

}  // namespace hkf
