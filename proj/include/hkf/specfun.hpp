#pragma once

// Gamma function and the two Mittag-Leffler families used throughout the
// library. Everything here is a pure function of its arguments.

#include <cstddef>
#include <vector>

namespace hkf {

/// Series-evaluator limits shared by ml2 and ml_ks.
struct SeriesLimits {
    double x_max = 50.0;          ///< largest |x| accepted
    double rel_eps = 1e-16;       ///< stop once |term| <= rel_eps * |partial sum|
    std::size_t max_terms = 10000;
};

struct MLQuery {
    double alpha;
    double beta;
    double x;
};

struct KSQuery {
    double alpha;
    double l;
    double m;
    double x;
};

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Gamma(x) for x > 0, via exp(log_gamma).
double gamma_fn(double x);

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(x) = sum x^k / Gamma(alpha k + beta).
///
/// Terms are formed in log space and summed with compensated (Neumaier)
/// summation. Throws DomainError for |x| > limits.x_max or when alternating
/// terms would cancel beyond the 1e-10 accuracy target, and ConvergenceError
/// if the term cap is hit.
double ml2(const MLQuery& q, const SeriesLimits& limits = {});

/// One-parameter Mittag-Leffler function E_alpha(x) = E_{alpha,1}(x).
double ml1(double alpha, double x, const SeriesLimits& limits = {});

/// Kilbas-Saigo generalized Mittag-Leffler function E_{alpha,l,m}(x) = sum c_k x^k.
///
/// c_0 = 1 and c_k = prod_{j<k} Gamma(alpha(jm+l)+1) / Gamma(alpha(jm+l+1)+1),
/// accumulated in log space. A gamma pole in either factor raises DomainError.
double ml_ks(const KSQuery& q, const SeriesLimits& limits = {});

/// The coefficients c_0 .. c_{k_max} of ml_ks for (alpha, l, m).
std::vector<double> ks_coefficients(double alpha, double l, double m, std::size_t k_max);

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace hkf
