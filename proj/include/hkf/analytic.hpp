#pragma once

// Closed-form solutions of the linear Cauchy problems, used as oracles for the
// Picard solver:
//
//   homogeneous:     phi = c z^{gamma-1} E_{alpha,gamma}(lambda z^alpha)
//   with source:     + int_0^z (z-u)^{alpha-1} E_{alpha,alpha}(lambda (z-u)^alpha) f(u) du
//   power-weighted:  phi = c/Gamma(alpha) z^{alpha-1} E_{alpha,1+xi/alpha,1+(xi-1)/alpha}(lambda z^{alpha+xi})

#include <cstddef>
#include <functional>
#include <vector>

#include "hkf/frame.hpp"

namespace hkf {

struct LinearProblemSpec {
    HKParams params;
    double lambda = 0.0;
    double c = 0.0;
    /// source(x, z); an empty function is the zero source.
    std::function<double(double x, double z)> source;
};

struct PowerWeightedSpec {
    HKParams params;  ///< beta must be 0
    double lambda = 0.0;
    double xi = 0.0;  ///< xi > -alpha
    double c = 0.0;
};

/// Panel resolution for the source integral of linear_solution.
struct SourceQuadrature {
    std::size_t n = 512;
    double grading = 0.0;  ///< 0 selects max(1, 2/alpha)
};

double homogeneous_solution(const LinearProblemSpec& spec, double x);

double linear_solution(const LinearProblemSpec& spec, double x, const SourceQuadrature& quad = {});

/// linear_solution at every node of `grid`; the result carries sigma = gamma - 1.
GridFn linear_solution_on(const LinearProblemSpec& spec, const GridPtr& grid);

double power_weighted_solution(const PowerWeightedSpec& spec, double x);

/// c_0 .. c_{j_max} with c_j = prod_{r=1}^{j} Gamma(r(alpha+xi)) / Gamma(r(alpha+xi)+alpha).
std::vector<double> cj_coefficients(double alpha, double xi, std::size_t j_max);

/// Truncated Picard iterate of the homogeneous linear problem:
/// c sum_{j=1}^{k+1} lambda^{j-1} z^{alpha j + beta(1-alpha) - 1} / Gamma(alpha j + beta(1-alpha)).
double homogeneous_iterate(const LinearProblemSpec& spec, std::size_t k, double x);

/// homogeneous_iterate at every node of `grid`, evaluated from the node z values;
/// the result carries sigma = gamma - 1.
GridFn homogeneous_iterate_on(const LinearProblemSpec& spec, std::size_t k, const GridPtr& grid);

}  // namespace hkf
