#include "hkf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hkf/errors.hpp"
#include "hkf/specfun.hpp"

namespace hkf {

namespace {

constexpr double kExponentTol = 1e-12;

struct PanelWeights {
    double near;
    double far;
};

// int_d^{d+h} v^{mu-1} phi(v) dv for the two linear hat functions on the panel:
// `near` is 1 at v = d (the node closest to the kernel singularity), `far` at v = d + h.
PanelWeights panel_weights(double d, double h, double mu) {
    if (d == 0.0) {
        const double hm = std::pow(h, mu);
        return {hm / (mu * (mu + 1.0)), hm / (mu + 1.0)};
    }
    const double r = h / d;
    const double dm = std::pow(d, mu);
    if (r < 0.5) {
        // (1+t)^{mu-1} = sum_n binom(mu-1, n) t^n, integrated termwise.
        double c = 1.0;
        double rp = r;
        double far = 0.0, near = 0.0;
        for (int n = 0; n < 200; ++n) {
            const double dn = static_cast<double>(n);
            const double tf = c * rp / (dn + 2.0);
            far += tf;
            near += tf / (dn + 1.0);
            if (std::fabs(tf) <= 1e-17 * std::fabs(far)) break;
            c *= (mu - 1.0 - dn) / (dn + 1.0);
            rp *= r;
        }
        return {dm * near, dm * far};
    }
    const double l1p = std::log1p(r);
    const double g = std::expm1(mu * l1p) / mu;  // int_0^r (1+t)^{mu-1} dt
    const double f = std::expm1((mu + 1.0) * l1p) / (mu + 1.0) - g;  // int_0^r (1+t)^{mu-1} t dt
    return {dm * (r * g - f) / r, dm * f / r};
}

// Lower incomplete beta B_t(p, q) for 0 < t <= 1/2, p > 0.
double incomplete_beta_small(double t, double p, double q) {
    double c = 1.0;
    double tn = 1.0;
    double sum = 0.0;
    for (int n = 0; n < 400; ++n) {
        const double dn = static_cast<double>(n);
        const double term = c * tn / (p + dn);
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
        c *= (dn + 1.0 - q) / (dn + 1.0);
        tn *= t;
    }
    return std::pow(t, p) * sum;
}

void require_order(double order, const char* who) {
    if (!(order > 0.0) || !std::isfinite(order)) {
        std::ostringstream os;
        os << who << ": order must satisfy order>0 (got " << order << ")";
        throw ValidationError(os.str());
    }
}

void require_derivative_order(double order, const char* who) {
    if (!(order > 0.0 && order < 1.0)) {
        std::ostringstream os;
        os << who << ": order must satisfy 0<order<1 (got " << order << ")";
        throw ValidationError(os.str());
    }
}

void require_integrable(double sigma, const char* who) {
    if (!(sigma > -1.0)) {
        std::ostringstream os;
        os << who << ": singular exponent sigma = " << sigma
           << " is not integrable at a (need sigma>-1)";
        throw DomainError(os.str());
    }
}

double gamma_ratio(double num, double den) { return std::exp(log_gamma(num) - log_gamma(den)); }

bool near_zero_exponent(double s) { return std::fabs(s) <= kExponentTol; }

// Nonuniform three-point derivative of `y` sampled at `z`.
std::vector<double> stencil_derivative(std::span<const double> z, std::span<const double> y) {
    const std::size_t n = z.size();
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (z[1] - z[0]);
        return d;
    }
    auto three_point = [&](std::size_t j0, double at) {
        // Derivative at `at` of the quadratic through nodes j0, j0+1, j0+2.
        const double x0 = z[j0], x1 = z[j0 + 1], x2 = z[j0 + 2];
        const double l0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
        const double l1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
        const double l2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
        return l0 * y[j0] + l1 * y[j0 + 1] + l2 * y[j0 + 2];
    };
    d[0] = three_point(0, z[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three_point(i - 1, z[i]);
    d[n - 1] = three_point(n - 3, z[n - 1]);
    return d;
}

// J^outer delta_rho J^inner f, with J^0 the identity.
GridFn derivative_chain(const GridFn& f, double inner, double outer) {
    if (is_pure_power(f)) {
        const double r = f.regular.front();
        require_integrable(f.sigma, "derivative");
        double sigma = f.sigma;
        double c = r;
        if (inner != 0.0) {
            c *= gamma_ratio(sigma + 1.0, sigma + 1.0 + inner);
            sigma += inner;
        }
        if (near_zero_exponent(sigma) || c == 0.0) return zero_fn(f.grid);
        c *= sigma;
        sigma -= 1.0;
        if (outer != 0.0) {
            require_integrable(sigma, "derivative");
            c *= gamma_ratio(sigma + 1.0, sigma + 1.0 + outer);
            sigma += outer;
        }
        return power_fn(f.grid, sigma, c);
    }
    // The leading term r_0 z^sigma goes through the exact power rule. Differencing it
    // numerically on the tiny panels near a would amplify the quadrature error.
    const double r0 = f.regular.front();
    if (r0 != 0.0) {
        GridFn rest = f;
        for (auto& r : rest.regular) r -= r0;
        const GridFn lead = derivative_chain(power_fn(f.grid, f.sigma, r0), inner, outer);
        const GridFn tail = derivative_chain(rest, inner, outer);
        if (is_pure_power(lead) && lead.regular.front() == 0.0) return tail;
        const double sigma = std::fmin(lead.sigma, tail.sigma);
        GridFn sum = rebase(lead, sigma);
        const GridFn t = rebase(tail, sigma);
        for (std::size_t i = 0; i < sum.regular.size(); ++i) sum.regular[i] += t.regular[i];
        return sum;
    }
    GridFn g = inner == 0.0 ? f : gfi_left(f, inner);
    GridFn d = delta_rho(g);
    return outer == 0.0 ? d : gfi_left(d, outer);
}

// Panels whose end points differ by more than this factor are split geometrically:
// linear interpolation of u^sigma r(u) across such a panel is too coarse.
constexpr double kMaxPanelRatio = 1.02;

// Sub-nodes of one split panel [z_{j-1}, z_j], with the products u^sigma * hat(u)
// of the two linear hats of the panel (`lo` is 1 at z_{j-1}, `hi` is 1 at z_j).
struct SplitPanel {
    std::vector<double> u, lo, hi;
};

struct KernelSetup {
    std::vector<double> scaled;       // coefficient / Gamma(order)
    std::vector<double> zs;           // z_k^sigma
    std::vector<SplitPanel> panels;   // entry j covers [z_{j-1}, z_j]; empty u when not split
};

SplitPanel split_panel(double a, double b, double sigma) {
    SplitPanel p;
    const double ratio = b / a;
    if (sigma == 0.0 || !(ratio > kMaxPanelRatio)) return p;
    const auto m = static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(kMaxPanelRatio)));
    const double h = b - a;
    for (std::size_t k = 0; k <= m; ++k) {
        const double u = k == 0 ? a : (k == m ? b : a * std::pow(ratio, static_cast<double>(k) / m));
        const double us = std::pow(u, sigma);
        p.u.push_back(u);
        p.lo.push_back(us * (b - u) / h);
        p.hi.push_back(us * (u - a) / h);
    }
    return p;
}

KernelSetup setup_kernel(const Grid& grid, std::span<const KernelTerm> kernel, double sigma) {
    for (const auto& term : kernel) require_order(term.order, "AbelWeights");
    KernelSetup k;
    k.scaled.resize(kernel.size());
    for (std::size_t t = 0; t < kernel.size(); ++t)
        k.scaled[t] = kernel[t].coefficient / gamma_fn(kernel[t].order);
    k.zs.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        k.zs[j] = sigma == 0.0 ? 1.0 : std::pow(grid.z(j), sigma);
    k.panels.resize(grid.size());
    for (std::size_t j = 1; j < grid.size(); ++j) k.panels[j] = split_panel(grid.z(j - 1), grid.z(j), sigma);
    return k;
}

// Row i of the left-sided weights, columns 0..i, accumulated into w.
void fill_left_row(const Grid& grid, std::span<const KernelTerm> kernel, const KernelSetup& k,
                   double sigma, std::size_t i, double* w) {
    const auto z = grid.z();
    // First panel (0, z_0]: u^sigma integrated exactly, regular part frozen at r_0.
    for (std::size_t t = 0; t < kernel.size(); ++t) {
        const double mu = kernel[t].order;
        if (i == 0) {
            w[0] += kernel[t].coefficient * std::pow(z[0], mu + sigma) *
                    gamma_ratio(sigma + 1.0, sigma + 1.0 + mu);
        } else {
            w[0] += k.scaled[t] * std::pow(z[i], mu + sigma) *
                    incomplete_beta_small(z[0] / z[i], sigma + 1.0, mu);
        }
    }
    for (std::size_t j = 1; j <= i; ++j) {
        const auto& split = k.panels[j];
        if (!split.u.empty()) {
            for (std::size_t s = 1; s < split.u.size(); ++s) {
                const double d = z[i] - split.u[s];
                const double h = split.u[s] - split.u[s - 1];
                for (std::size_t t = 0; t < kernel.size(); ++t) {
                    const auto pw = panel_weights(d, h, kernel[t].order);
                    w[j - 1] += k.scaled[t] * (pw.near * split.lo[s] + pw.far * split.lo[s - 1]);
                    w[j] += k.scaled[t] * (pw.near * split.hi[s] + pw.far * split.hi[s - 1]);
                }
            }
            continue;
        }
        const double d = z[i] - z[j];
        const double h = z[j] - z[j - 1];
        for (std::size_t t = 0; t < kernel.size(); ++t) {
            const auto pw = panel_weights(d, h, kernel[t].order);
            w[j] += k.scaled[t] * pw.near * k.zs[j];
            w[j - 1] += k.scaled[t] * pw.far * k.zs[j - 1];
        }
    }
}

// Row i of the right-sided weights, columns i..n-1 stored from w[0].
void fill_right_row(const Grid& grid, std::span<const KernelTerm> kernel, const KernelSetup& k,
                    std::size_t i, double* w) {
    const auto z = grid.z();
    for (std::size_t j = i; j + 1 < grid.size(); ++j) {
        const auto& split = k.panels[j + 1];
        if (!split.u.empty()) {
            for (std::size_t s = 1; s < split.u.size(); ++s) {
                const double d = split.u[s - 1] - z[i];
                const double h = split.u[s] - split.u[s - 1];
                for (std::size_t t = 0; t < kernel.size(); ++t) {
                    const auto pw = panel_weights(d, h, kernel[t].order);
                    w[j - i] += k.scaled[t] * (pw.near * split.lo[s - 1] + pw.far * split.lo[s]);
                    w[j + 1 - i] += k.scaled[t] * (pw.near * split.hi[s - 1] + pw.far * split.hi[s]);
                }
            }
            continue;
        }
        const double d = z[j] - z[i];
        const double h = z[j + 1] - z[j];
        for (std::size_t t = 0; t < kernel.size(); ++t) {
            const auto pw = panel_weights(d, h, kernel[t].order);
            w[j - i] += k.scaled[t] * pw.near * k.zs[j];
            w[j + 1 - i] += k.scaled[t] * pw.far * k.zs[j + 1];
        }
    }
}

}  // namespace

AbelWeights::AbelWeights(const GridPtr& grid, std::span<const KernelTerm> kernel, double sigma,
                         Side side)
    : n_(grid->size()), side_(side) {
    if (side == Side::left) require_integrable(sigma, "AbelWeights");
    const auto setup = setup_kernel(*grid, kernel, sigma);

    offsets_.resize(n_ + 1);
    offsets_[0] = 0;
    for (std::size_t i = 0; i < n_; ++i)
        offsets_[i + 1] = offsets_[i] + (side == Side::left ? i + 1 : n_ - i);
    weights_.assign(offsets_[n_], 0.0);

    for (std::size_t i = 0; i < n_; ++i) {
        double* w = weights_.data() + offsets_[i];
        if (side == Side::left) {
            fill_left_row(*grid, kernel, setup, sigma, i, w);
        } else {
            fill_right_row(*grid, kernel, setup, i, w);
        }
    }
}

std::vector<double> abel_left_row(const GridPtr& grid, std::span<const KernelTerm> kernel,
                                  double sigma, std::size_t i) {
    require_integrable(sigma, "abel_left_row");
    if (i >= grid->size()) throw ValidationError("abel_left_row: row index out of range");
    const auto setup = setup_kernel(*grid, kernel, sigma);
    std::vector<double> w(i + 1, 0.0);
    fill_left_row(*grid, kernel, setup, sigma, i, w.data());
    return w;
}

std::span<const double> AbelWeights::row(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::vector<double> AbelWeights::apply(std::span<const double> regular) const {
    if (regular.size() != n_) throw ValidationError("AbelWeights::apply: size mismatch");
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        const auto w = row(i);
        const std::size_t c0 = first_column(i);
        CompensatedSum s;
        for (std::size_t j = 0; j < w.size(); ++j) s.add(w[j] * regular[c0 + j]);
        out[i] = s.value();
    }
    return out;
}

bool is_pure_power(const GridFn& f) {
    if (f.regular.empty()) return false;
    const auto [lo, hi] = std::minmax_element(f.regular.begin(), f.regular.end());
    const double scale = std::max(std::fabs(*lo), std::fabs(*hi));
    return (*hi - *lo) <= 1e-12 * scale;
}

GridFn gfi_left(const GridFn& f, double order) {
    require_order(order, "gfi_left");
    require_integrable(f.sigma, "gfi_left");
    const KernelTerm term{1.0, order};
    const AbelWeights weights(f.grid, std::span(&term, 1), f.sigma, Side::left);
    GridFn out{f.grid, f.sigma + order, weights.apply(f.regular)};
    for (std::size_t i = 0; i < out.regular.size(); ++i)
        out.regular[i] /= std::pow(f.grid->z(i), out.sigma);
    return out;
}

GridFn gfi_right(const GridFn& f, double order) {
    require_order(order, "gfi_right");
    const KernelTerm term{1.0, order};
    const AbelWeights weights(f.grid, std::span(&term, 1), f.sigma, Side::right);
    return GridFn{f.grid, 0.0, weights.apply(f.regular)};
}

GridFn delta_rho(const GridFn& f) {
    const double s = f.sigma;
    if (is_pure_power(f)) {
        if (near_zero_exponent(s) || f.regular.front() == 0.0) return zero_fn(f.grid);
        return power_fn(f.grid, s - 1.0, s * f.regular.front());
    }
    const auto z = f.grid->z();
    const auto dr = stencil_derivative(z, f.regular);
    if (near_zero_exponent(s)) return GridFn{f.grid, 0.0, dr};
    // d/dz [z^s R] = z^{s-1} (s R + z R')
    GridFn out{f.grid, s - 1.0, std::vector<double>(f.regular.size())};
    for (std::size_t i = 0; i < dr.size(); ++i) out.regular[i] = s * f.regular[i] + z[i] * dr[i];
    return out;
}

GridFn gfd(const GridFn& f, double order) {
    require_derivative_order(order, "gfd");
    return derivative_chain(f, 1.0 - order, 0.0);
}

GridFn hk_derivative(const GridFn& f) {
    const auto& p = f.grid->params();
    const double alpha = p.alpha();
    const double beta = p.beta();
    return derivative_chain(f, (1.0 - beta) * (1.0 - alpha), beta * (1.0 - alpha));
}

double power_rule_analytic(double xi, double order, const HKParams& p, double x) {
    if (!(xi > 0.0)) throw ValidationError("power_rule_analytic: xi must satisfy xi>0");
    if (!(order >= 0.0)) throw ValidationError("power_rule_analytic: order must satisfy order>=0");
    const double z = z_of_x(p, x);
    if (order == 0.0) return std::pow(z, xi - 1.0);
    return gamma_ratio(xi, xi + order) * std::pow(z, xi + order - 1.0);
}

Reconstruction reconstruct(const GridFn& f, double order) {
    require_derivative_order(order, "reconstruct");
    require_integrable(f.sigma, "reconstruct");

    const GridFn d = gfd(f, order);
    const bool vanishing = is_pure_power(d) && d.regular.front() == 0.0;
    GridFn jd = vanishing ? zero_fn(f.grid, f.sigma) : gfi_left(d, order);

    // (J^{1-order} f)(a+): z^{s'} R(z) with s' = sigma + 1 - order.
    const double s_prime = f.sigma + 1.0 - order;
    double coefficient = 0.0;
    if (near_zero_exponent(s_prime)) {
        if (is_pure_power(f)) {
            coefficient = f.regular.front() * gamma_ratio(f.sigma + 1.0, f.sigma + 2.0 - order);
        } else {
            const GridFn g = gfi_left(f, 1.0 - order);
            const auto z = f.grid->z();
            const double slope = (g.regular[1] - g.regular[0]) / (z[1] - z[0]);
            coefficient = g.regular[0] - slope * z[0];
        }
    } else if (s_prime < 0.0) {
        throw DomainError("reconstruct: (J^{1-order} f)(a+) is unbounded for this sigma");
    }
    return {std::move(jd), coefficient};
}

}  // namespace hkf
