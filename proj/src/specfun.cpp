#include "hkf/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hkf/errors.hpp"

namespace hkf {

namespace {

// Rational (Lanczos-class) approximation with g = 671/128 and 14 terms;
// relative error below 2e-14 on the positive axis.
constexpr double kLanczosShift = 5.24218750000000000;
constexpr double kLanczosSeries0 = 0.999999999999997092;
constexpr double kSqrtTwoPi = 2.5066282746310005;
constexpr std::array<double, 14> kLanczosCoefficients = {
    57.1562356658629235,
#ifdef HKF_PERTURBED_GAMMA
    // Negative-control build: a single corrupted digit.
    -59.5979613554754912,
#else
    -59.5979603554754912,
#endif
    14.1360979747417471,     -0.491913816097620199,  .339946499848118887e-4,
    .465236289270485756e-4,  -.983744753048795646e-4, .158088703224912494e-3,
    -.210264441724104883e-3, .217439618115212643e-3,  -.164318106536763890e-3,
    .844182239838527433e-4,  -.261908384015814087e-4, .368991826595316234e-5};

// Largest |term| / |sum| ratio for which double arithmetic still delivers
// 1e-10 relative accuracy.
constexpr double kMaxCancellation = 1e-10 / (4.0 * std::numeric_limits<double>::epsilon());

bool is_gamma_pole(double v) {
    if (v > 0.0) return false;
    const double r = std::round(v);
    return std::fabs(v - r) <= 1e-12 * std::fmax(1.0, std::fabs(v));
}

/// ln|Gamma(v)| and sign(Gamma(v)) for any non-pole real v.
struct SignedLogGamma {
    double log_abs;
    double sign;
};

SignedLogGamma signed_log_gamma(double v) {
    if (v > 0.0) return {log_gamma(v), 1.0};
    // Reflection: Gamma(v) Gamma(1-v) = pi / sin(pi v), with Gamma(1-v) > 0.
    const double s = std::sin(std::numbers::pi * v);
    return {std::log(std::numbers::pi) - std::log(std::fabs(s)) - log_gamma(1.0 - v),
            s < 0.0 ? -1.0 : 1.0};
}

void check_x(double x, const SeriesLimits& limits) {
    if (!std::isfinite(x) || std::fabs(x) > limits.x_max) {
        std::ostringstream os;
        os << "series regime exceeded: |x| = " << std::fabs(x) << " > " << limits.x_max;
        throw DomainError(os.str());
    }
}

void check_cancellation(double max_term, double sum) {
    if (max_term > kMaxCancellation * std::fabs(sum)) {
        std::ostringstream os;
        os << "loss of significance: largest term " << max_term << " against sum " << sum;
        throw DomainError(os.str());
    }
}

[[noreturn]] void throw_term_cap(std::size_t cap) {
    throw ConvergenceError("series did not converge within " + std::to_string(cap) + " terms");
}

}  // namespace

void CompensatedSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
        comp_ += (sum_ - t) + v;
    } else {
        comp_ += (v - t) + sum_;
    }
    sum_ = t;
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "log_gamma: argument must be positive and finite, got " << x;
        throw DomainError(os.str());
    }
    double y = x;
    double tmp = x + kLanczosShift;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = kLanczosSeries0;
    for (double c : kLanczosCoefficients) ser += c / ++y;
    return tmp + std::log(kSqrtTwoPi * ser / x);
}

double gamma_fn(double x) {
    // Integer arguments: (x-1)! by direct product, exact through 22!.
    if (x >= 1.0 && x <= 171.0 && x == std::floor(x)) {
        double f = 1.0;
        for (double k = 2.0; k < x; k += 1.0) f *= k;
        return f;
    }
    return std::exp(log_gamma(x));
}

double ml2(const MLQuery& q, const SeriesLimits& limits) {
    if (!(q.alpha > 0.0)) throw ValidationError("ml2: alpha must satisfy alpha > 0");
    if (!(q.beta > 0.0)) throw ValidationError("ml2: beta must satisfy beta > 0");
    check_x(q.x, limits);
    if (q.x == 0.0) return 1.0 / gamma_fn(q.beta);

    const double log_abs_x = std::log(std::fabs(q.x));
    const bool alternating = q.x < 0.0;
    CompensatedSum sum;
    double max_term = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < limits.max_terms; ++k) {
        const double arg = q.alpha * static_cast<double>(k) + q.beta;
        const double log_power = static_cast<double>(k) * log_abs_x;
        // Direct quotient while both factors stay in range; log space otherwise.
        double term = (arg <= 171.0 && std::fabs(log_power) < 700.0)
                          ? std::pow(std::fabs(q.x), static_cast<double>(k)) / gamma_fn(arg)
                          : std::exp(log_power - log_gamma(arg));
        if (alternating && (k % 2 == 1)) term = -term;
        sum.add(term);
        const double mag = std::fabs(term);
        max_term = std::fmax(max_term, mag);
        // Past the peak of the term sequence the magnitudes decrease monotonically.
        if (k > 0 && arg > 2.0 && mag < prev && mag <= limits.rel_eps * std::fabs(sum.value())) {
            check_cancellation(max_term, sum.value());
            return sum.value();
        }
        prev = mag;
    }
    throw_term_cap(limits.max_terms);
}

double ml1(double alpha, double x, const SeriesLimits& limits) {
    return ml2({alpha, 1.0, x}, limits);
}

namespace {

/// Incremental log-space product for the Kilbas-Saigo coefficients.
class KsCoefficientStream {
  public:
    KsCoefficientStream(double alpha, double l, double m) : alpha_(alpha), l_(l), m_(m) {}

    /// Advance from c_j to c_{j+1}. Returns the numerator gamma argument used.
    double advance() {
        const double jm_l = static_cast<double>(j_) * m_ + l_;
        const double num_arg = alpha_ * jm_l + 1.0;
        const double den_arg = alpha_ * (jm_l + 1.0) + 1.0;
        if (is_gamma_pole(num_arg) || is_gamma_pole(den_arg)) {
            std::ostringstream os;
            os << "ml_ks: gamma pole at j = " << j_ << " (arguments " << num_arg << ", " << den_arg
               << ")";
            throw DomainError(os.str());
        }
        const auto num = signed_log_gamma(num_arg);
        const auto den = signed_log_gamma(den_arg);
        log_abs_ += num.log_abs - den.log_abs;
        sign_ *= num.sign * den.sign;
        ++j_;
        return num_arg;
    }

    double log_abs() const { return log_abs_; }
    double sign() const { return sign_; }

  private:
    double alpha_, l_, m_;
    std::size_t j_ = 0;
    double log_abs_ = 0.0;
    double sign_ = 1.0;
};

void validate_ks(double alpha, double m) {
    if (!(alpha > 0.0)) throw ValidationError("ml_ks: alpha must satisfy alpha > 0");
    if (!(m > 0.0)) throw ValidationError("ml_ks: m must satisfy m > 0");
}

}  // namespace

double ml_ks(const KSQuery& q, const SeriesLimits& limits) {
    validate_ks(q.alpha, q.m);
    check_x(q.x, limits);
    if (q.x == 0.0) return 1.0;

    const double log_abs_x = std::log(std::fabs(q.x));
    const double x_sign = q.x < 0.0 ? -1.0 : 1.0;
    KsCoefficientStream coeff(q.alpha, q.l, q.m);
    CompensatedSum sum;
    sum.add(1.0);
    double max_term = 1.0;
    double prev = 1.0;
    double x_sign_pow = 1.0;
    for (std::size_t k = 1; k < limits.max_terms; ++k) {
        const double num_arg = coeff.advance();
        x_sign_pow *= x_sign;
        const double term = coeff.sign() * x_sign_pow *
                            std::exp(coeff.log_abs() + static_cast<double>(k) * log_abs_x);
        sum.add(term);
        const double mag = std::fabs(term);
        max_term = std::fmax(max_term, mag);
        if (num_arg > 2.0 && mag < prev && mag <= limits.rel_eps * std::fabs(sum.value())) {
            check_cancellation(max_term, sum.value());
            return sum.value();
        }
        prev = mag;
    }
    throw_term_cap(limits.max_terms);
}

std::vector<double> ks_coefficients(double alpha, double l, double m, std::size_t k_max) {
    validate_ks(alpha, m);
    std::vector<double> c;
    c.reserve(k_max + 1);
    c.push_back(1.0);
    KsCoefficientStream coeff(alpha, l, m);
    for (std::size_t k = 1; k <= k_max; ++k) {
        coeff.advance();
        c.push_back(coeff.sign() * std::exp(coeff.log_abs()));
    }
    return c;
}

}  // namespace hkf
