#include "hkf/frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hkf/errors.hpp"

namespace hkf {

namespace {

template <typename T>
[[noreturn]] void fail(const char* bound, T value) {
    std::ostringstream os;
    os << "parameter violates " << bound << " (got " << value << ")";
    throw ValidationError(os.str());
}

Interpolation classify(double beta, const RhoMode& rho) {
    if (rho.is_hadamard()) {
        if (beta == 0.0) return Interpolation::hadamard;
        if (beta == 1.0) return Interpolation::caputo_hadamard;
        return Interpolation::hilfer_hadamard;
    }
    if (rho.rho() == 1.0) {
        if (beta == 0.0) return Interpolation::riemann_liouville;
        if (beta == 1.0) return Interpolation::caputo;
        return Interpolation::hilfer;
    }
    if (beta == 0.0) return Interpolation::katugampola;
    if (beta == 1.0) return Interpolation::caputo_katugampola;
    return Interpolation::hilfer_katugampola;
}

}  // namespace

std::string to_string(Interpolation target) {
    switch (target) {
        case Interpolation::hilfer_katugampola: return "hilfer-katugampola";
        case Interpolation::katugampola: return "katugampola";
        case Interpolation::caputo_katugampola: return "caputo-katugampola";
        case Interpolation::hilfer: return "hilfer";
        case Interpolation::riemann_liouville: return "riemann-liouville";
        case Interpolation::caputo: return "caputo";
        case Interpolation::hilfer_hadamard: return "hilfer-hadamard";
        case Interpolation::hadamard: return "hadamard";
        case Interpolation::caputo_hadamard: return "caputo-hadamard";
    }
    return "unknown";
}

HKParams make_params(double alpha, double beta, RhoMode rho, double a, double b) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail("0<alpha<1", alpha);
    if (!(beta >= 0.0 && beta <= 1.0)) fail("0<=beta<=1", beta);
    if (!rho.is_hadamard() && !(rho.rho() > 0.0 && std::isfinite(rho.rho())))
        fail("rho>0", rho.rho());
    if (!(a >= 0.0) || !std::isfinite(a)) fail("a>=0", a);
    if (a == 0.0 && (rho.is_hadamard() || rho.rho() < 1.0))
        fail("a>0 (a=0 requires a plain kernel with rho>=1)", a);
    if (!(b > a) || !std::isfinite(b)) fail("a<b", b);

    HKParams p;
    p.alpha_ = alpha;
    p.beta_ = beta;
    p.gamma_ = alpha + beta * (1.0 - alpha);
    p.rho_ = rho;
    p.a_ = a;
    p.b_ = b;
    p.target_ = classify(beta, rho);
    return p;
}

HKParams HKParams::with_b(double b) const { return make_params(alpha_, beta_, rho_, a_, b); }

double z_of_x(const HKParams& p, double x) {
    if (!(x >= p.a() && x <= p.b())) {
        std::ostringstream os;
        os << "z_of_x: x = " << x << " outside [" << p.a() << ", " << p.b() << "]";
        throw DomainError(os.str());
    }
    if (p.rho_mode().is_hadamard()) return std::log(x / p.a());
    const double rho = p.rho_mode().rho();
    if (p.a() == 0.0) return std::pow(x, rho) / rho;
    // a^rho (exp(rho ln(x/a)) - 1) / rho keeps full precision for x near a.
    return std::pow(p.a(), rho) * std::expm1(rho * std::log(x / p.a())) / rho;
}

double x_of_z(const HKParams& p, double z) {
    if (!(z >= 0.0) || !std::isfinite(z)) {
        std::ostringstream os;
        os << "x_of_z: z = " << z << " must be finite and nonnegative";
        throw DomainError(os.str());
    }
    if (p.rho_mode().is_hadamard()) return p.a() * std::exp(z);
    const double rho = p.rho_mode().rho();
    if (p.a() == 0.0) return std::pow(rho * z, 1.0 / rho);
    return p.a() * std::exp(std::log1p(rho * z / std::pow(p.a(), rho)) / rho);
}

double default_grading(double alpha) { return std::max(1.0, 2.0 / alpha); }

GridPtr make_graded_grid(const HKParams& p, std::size_t n, double grading) {
    if (n < 2) fail("n>=2", n);
    if (!(grading >= 1.0) || !std::isfinite(grading)) fail("grading>=1", grading);

    auto grid = std::shared_ptr<Grid>(new Grid(p, grading));
    const double z_end = z_of_x(p, p.b());
    grid->z_.resize(n);
    grid->x_.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double z = z_end * std::pow(static_cast<double>(i) / dn, grading);
        grid->z_[i - 1] = z;
        grid->x_[i - 1] = std::clamp(x_of_z(p, z), p.a(), p.b());
    }
    grid->z_.back() = z_end;
    grid->x_.back() = p.b();
    return grid;
}

GridPtr make_graded_grid(const HKParams& p, std::size_t n) {
    return make_graded_grid(p, n, default_grading(p.alpha()));
}

double GridFn::value(std::size_t i) const {
    return sigma == 0.0 ? regular[i] : std::pow(grid->z(i), sigma) * regular[i];
}

std::vector<double> GridFn::values() const {
    std::vector<double> v(regular.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = value(i);
    return v;
}

GridFn zero_fn(GridPtr grid, double sigma) {
    const auto n = grid->size();
    return GridFn{std::move(grid), sigma, std::vector<double>(n, 0.0)};
}

GridFn power_fn(GridPtr grid, double sigma, double c) {
    const auto n = grid->size();
    return GridFn{std::move(grid), sigma, std::vector<double>(n, c)};
}

GridFn rebase(const GridFn& f, double sigma) {
    GridFn out{f.grid, sigma, f.regular};
    const double shift = f.sigma - sigma;
    if (shift == 0.0) return out;
    for (std::size_t i = 0; i < out.regular.size(); ++i)
        out.regular[i] *= std::pow(f.grid->z(i), shift);
    return out;
}

WeightExponent::WeightExponent(double mu) : mu_(mu) {
    if (!(mu >= 0.0 && mu < 1.0)) fail("0<=mu<1", mu);
}

double weighted_norm(const GridFn& f, WeightExponent w) {
    double norm = 0.0;
    const double exponent = w.mu() + f.sigma;
    for (std::size_t i = 0; i < f.regular.size(); ++i) {
        const double scale = exponent == 0.0 ? 1.0 : std::pow(f.grid->z(i), exponent);
        norm = std::max(norm, std::fabs(scale * f.regular[i]));
    }
    return norm;
}

double embedding_bound(double mu1, double mu2, const HKParams& p) {
    WeightExponent{mu1};
    WeightExponent{mu2};
    if (mu1 > mu2) fail("mu1<=mu2", mu1);
    if (p.a() == 0.0) fail("a!=0", p.a());
    return std::pow(z_of_x(p, p.b()), mu2 - mu1);
}

}  // namespace hkf
