#pragma once

// Generalized (Katugampola) fractional integrals and derivatives on a graded
// grid, and the Hilfer-Katugampola derivative built from them.
//
// Every operator works in the coordinate z = (x^rho - a^rho)/rho, where the
// left-sided integral becomes the classical Abel form
//
//     (J^mu f)(z) = 1/Gamma(mu) * int_0^z (z - u)^{mu-1} f(u) du
//
// and delta_rho = x^{1-rho} d/dx becomes d/dz. The kernel parameters
// (alpha, beta, rho, a, b) are taken from the grid attached to each GridFn.

#include <cstddef>
#include <span>
#include <vector>

#include "hkf/frame.hpp"

namespace hkf {

/// One term c * v^{mu-1} / Gamma(mu) of a kernel k(v) written as a sum of powers.
struct KernelTerm {
    double coefficient;
    double order;  ///< mu > 0
};

enum class Side { left, right };

/// Product-integration weights: (K f)(z_i) ~= sum_j W(i, j) * regular_j.
///
/// Panels between consecutive nodes integrate the kernel exactly against the
/// piecewise-linear interpolant of f. On the left-sided first panel (0, z_1]
/// the singular factor u^sigma is integrated exactly against the constant
/// regular value at z_1.
class AbelWeights {
  public:
    AbelWeights(const GridPtr& grid, std::span<const KernelTerm> kernel, double sigma, Side side);

    std::size_t size() const noexcept { return n_; }
    /// Weights of row i over columns [first_column(i), first_column(i) + row(i).size()).
    std::span<const double> row(std::size_t i) const;
    std::size_t first_column(std::size_t i) const noexcept { return side_ == Side::left ? 0 : i; }

    /// Values (not regular parts) of the integral at every node.
    std::vector<double> apply(std::span<const double> regular) const;

  private:
    std::size_t n_;
    Side side_;
    std::vector<std::size_t> offsets_;
    std::vector<double> weights_;
};

/// A single left-sided row (columns 0..i) of AbelWeights, without building the rest.
std::vector<double> abel_left_row(const GridPtr& grid, std::span<const KernelTerm> kernel,
                                  double sigma, std::size_t i);

/// Left-sided generalized fractional integral. order > 0; f.sigma > -1.
/// The result carries sigma = f.sigma + order.
GridFn gfi_left(const GridFn& f, double order);

/// Right-sided generalized fractional integral over [x, b]. Result carries sigma = 0.
GridFn gfi_right(const GridFn& f, double order);

/// delta_rho f = d f / dz. Differentiates the regular part with second-order
/// stencils and the singular factor analytically; pure powers are exact.
GridFn delta_rho(const GridFn& f);

/// Generalized fractional derivative delta_rho J^{1-order}, 0 < order < 1.
GridFn gfd(const GridFn& f, double order);

/// Hilfer-Katugampola derivative J^{beta(1-alpha)} delta_rho J^{(1-beta)(1-alpha)} f,
/// with alpha and beta from the grid parameters.
GridFn hk_derivative(const GridFn& f);

/// J^order z^{xi-1} = Gamma(xi)/Gamma(xi+order) z^{xi+order-1}, evaluated at x.
double power_rule_analytic(double xi, double order, const HKParams& p, double x);

struct Reconstruction {
    GridFn integral_of_derivative;  ///< J^order D^order f
    double boundary_coefficient;    ///< (J^{1-order} f)(a+)
};

/// J^order D^order f together with the boundary value (J^{1-order} f)(a+), so that
/// J^order D^order f = f - coefficient / Gamma(order) * z^{order-1}.
Reconstruction reconstruct(const GridFn& f, double order);

/// True when the regular part is constant to 1e-12 relative.
bool is_pure_power(const GridFn& f);

}  // namespace hkf
