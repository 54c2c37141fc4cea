#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/modulus.hpp"

namespace wsteiner {

struct NonDiniError : std::domain_error {
    using std::domain_error::domain_error;
};

// A gauge: nondecreasing on (0, domain_upper], vanishing at 0+.
struct Gauge {
    enum class Kind { geometric, log_geometric, log_inverse, tabulated, composed };

    Kind kind = Kind::geometric;
    double a = 1.0;      // geometric / log_geometric coefficient (a = 0 gives the zero gauge)
    double alpha = 1.0;  // geometric: (0,1]; log_geometric: > 0
    std::vector<double> r_grid, xi_values;   // tabulated
    ModulusCurve curve;                      // composed: r -> delta^{-1}(inner(r))
    std::shared_ptr<const Gauge> inner;      // composed
    double domain_upper = 1.0;

    static Gauge geometric(double a, double alpha, double b = 1.0) {
        if (a < 0 || !(alpha > 0) || alpha > 1.0 || !(b > 0))
            throw std::invalid_argument("Gauge::geometric: need a >= 0, alpha in (0,1], b > 0");
        Gauge g; g.kind = Kind::geometric; g.a = a; g.alpha = alpha; g.domain_upper = b;
        return g;
    }
    static Gauge log_geometric(double a, double alpha, double b = 0.5) {
        if (!(a > 0) || !(alpha > 0) || !(b > 0) || b >= 1.0)
            throw std::invalid_argument("Gauge::log_geometric: need a, alpha > 0 and b in (0,1)");
        Gauge g; g.kind = Kind::log_geometric; g.a = a; g.alpha = alpha; g.domain_upper = b;
        return g;
    }
    static Gauge log_inverse(double b = 0.5) {
        if (!(b > 0) || b >= 1.0)
            throw std::invalid_argument("Gauge::log_inverse: need b in (0,1)");
        Gauge g; g.kind = Kind::log_inverse; g.domain_upper = b;
        return g;
    }
    static Gauge tabulated(std::vector<double> r_grid, std::vector<double> xi_values) {
        if (r_grid.size() != xi_values.size() || r_grid.size() < 2)
            throw std::invalid_argument("Gauge::tabulated: need >= 2 matching samples");
        for (std::size_t i = 0; i < r_grid.size(); ++i) {
            if (!(r_grid[i] > 0) || xi_values[i] < 0)
                throw std::invalid_argument("Gauge::tabulated: positive grid, nonnegative values");
            if (i > 0 && (r_grid[i] <= r_grid[i - 1] || xi_values[i] < xi_values[i - 1]))
                throw std::invalid_argument("Gauge::tabulated: grid ascending, values nondecreasing");
        }
        Gauge g; g.kind = Kind::tabulated;
        g.domain_upper = r_grid.back();
        g.r_grid = std::move(r_grid); g.xi_values = std::move(xi_values);
        return g;
    }
    static Gauge composed(ModulusCurve curve, Gauge inner_gauge) {
        Gauge g; g.kind = Kind::composed;
        g.curve = std::move(curve);
        g.domain_upper = inner_gauge.domain_upper;
        g.inner = std::make_shared<const Gauge>(std::move(inner_gauge));
        return g;
    }
};

inline double gauge_eval(const Gauge& g, double r) {
    if (!(r > 0) || r > g.domain_upper * (1 + 1e-12))
        throw std::invalid_argument("gauge_eval: r outside (0, domain_upper]");
    switch (g.kind) {
        case Gauge::Kind::geometric:
            return g.a * std::pow(r, g.alpha);
        case Gauge::Kind::log_geometric:
            return g.a * std::pow(std::abs(std::log(r)), -1.0 - g.alpha);
        case Gauge::Kind::log_inverse:
            return 1.0 / std::abs(std::log(r));
        case Gauge::Kind::tabulated: {
            const auto& rg = g.r_grid;
            const auto& xi = g.xi_values;
            if (r >= rg.back()) return xi.back();      // constant extension above
            if (r <= rg.front())                       // linear to (0,0) below
                return xi.front() * (r / rg.front());
            auto it = std::upper_bound(rg.begin(), rg.end(), r);
            std::size_t k = static_cast<std::size_t>(it - rg.begin());
            double t = (r - rg[k - 1]) / (rg[k] - rg[k - 1]);
            return xi[k - 1] + t * (xi[k] - xi[k - 1]);
        }
        case Gauge::Kind::composed:
            return modulus_inverse(g.curve, std::max(gauge_eval(*g.inner, r), 1e-300));
    }
    throw std::logic_error("gauge_eval: unknown kind");
}

namespace detail {

struct HeadFit {
    // integral of xi(rho)/rho over (0, x], from the fitted model
    double integral_to(double x) const {
        if (zero) return 0.0;
        if (power) return c * std::pow(x, s) / s;
        return c * std::pow(std::abs(std::log(x)), 1.0 - q) / (q - 1.0);
    }
    bool zero = false, power = true;
    double c = 0, s = 1, q = 2;
};

// Fit the gauge head on the smallest resolvable decade [r0, 10 r0] with a
// power law c*rho^s and a log-power c*|log rho|^{-q}; keep the model with the
// smaller midpoint residual. A gauge whose head fits neither with s > 0 nor
// q > 1 is declared non-Dini.
inline HeadFit fit_head(const Gauge& g, double r0) {
    double xa = gauge_eval(g, r0), xb = gauge_eval(g, 10 * r0);
    HeadFit fit;
    if (xa <= 0 && xb <= 0) { fit.zero = true; return fit; }
    if (xa <= 0) { fit.power = true; fit.s = 1.0; fit.c = xb / (10 * r0); return fit; }
    double xm = gauge_eval(g, std::sqrt(10.0) * r0);
    double s = std::log(xb / xa) / std::log(10.0);
    double res_pow = std::numeric_limits<double>::infinity();
    double c_pow = xa / std::pow(r0, s);
    if (std::isfinite(s))
        res_pow = std::abs(c_pow * std::pow(std::sqrt(10.0) * r0, s) - xm);
    double la = std::abs(std::log(r0)), lb = std::abs(std::log(10 * r0));
    double q = std::log(xb / xa) / std::log(la / lb);
    double res_log = std::numeric_limits<double>::infinity();
    double c_log = xa * std::pow(la, q);
    if (std::isfinite(q))
        res_log = std::abs(c_log * std::pow(std::abs(std::log(std::sqrt(10.0) * r0)), -q) - xm);
    if (res_pow <= res_log) {
        if (!(s > 0)) {
            if (q > 1) { fit.power = false; fit.c = c_log; fit.q = q; return fit; }
            throw NonDiniError("mean_slope: gauge head does not vanish fast enough");
        }
        fit.power = true; fit.c = c_pow; fit.s = s;
    } else {
        if (!(q > 1)) {
            if (s > 0) { fit.power = true; fit.c = c_pow; fit.s = s; return fit; }
            throw NonDiniError("mean_slope: gauge head does not vanish fast enough");
        }
        fit.power = false; fit.c = c_log; fit.q = q;
    }
    return fit;
}

}  // namespace detail

// Quadrature route for the mean slope zeta(r) = int_0^r xi(rho)/rho drho:
// analytic head below r0 = 1e-8, adaptive Simpson on the log axis above.
inline double mean_slope_numeric(const Gauge& g, double r) {
    if (!(r > 0) || r > g.domain_upper * (1 + 1e-12))
        throw std::invalid_argument("mean_slope: r outside (0, domain_upper]");
    const double r0 = 1e-8;
    auto fit = detail::fit_head(g, std::min(r0, r / 20.0));
    if (r <= r0 * 10) return fit.integral_to(r);
    double head = fit.integral_to(r0);
    auto integrand = [&](double u) { return gauge_eval(g, std::exp(u)); };
    double tail = adaptive_simpson(integrand, std::log(r0), std::log(r), 1e-12);
    return head + tail;
}

inline double mean_slope(const Gauge& g, double r) {
    if (!(r > 0) || r > g.domain_upper * (1 + 1e-12))
        throw std::invalid_argument("mean_slope: r outside (0, domain_upper]");
    switch (g.kind) {
        case Gauge::Kind::geometric:
            return gauge_eval(g, r) / g.alpha;
        case Gauge::Kind::log_geometric:
            return g.a * std::pow(std::abs(std::log(r)), -g.alpha) / g.alpha;
        case Gauge::Kind::log_inverse:
            throw NonDiniError("mean_slope: the gauge 1/|log r| is not Dini");
        default:
            return mean_slope_numeric(g, r);
    }
}

struct DiniTestResult {
    bool is_dini = false;
    double partial_sum = 0;
    std::optional<double> tail_bound;  // (beta/(beta-1)) * zeta(beta^{-(k-1)})
};

// Dyadic-series test: xi is Dini iff sum_j xi(beta^{-j}) converges. Closed
// form variants return the analytic verdict; tabulated/composed gauges use a
// ratio comparison of the last 8 in-domain terms.
inline DiniTestResult dini_test(const Gauge& g, double beta, int J) {
    if (!(beta > 1)) throw std::invalid_argument("dini_test: beta must be > 1");
    if (J < 8) throw std::invalid_argument("dini_test: J must be >= 8");
    DiniTestResult out;
    std::vector<double> terms;
    int last_j = -1;
    for (int j = 0; j <= J; ++j) {
        double r = std::pow(beta, -j);
        if (r > g.domain_upper || (g.kind == Gauge::Kind::log_geometric && r >= 1.0) ||
            (g.kind == Gauge::Kind::log_inverse && r >= 1.0))
            continue;
        terms.push_back(gauge_eval(g, r));
        out.partial_sum += terms.back();
        last_j = j;
    }
    switch (g.kind) {
        case Gauge::Kind::geometric: out.is_dini = true; break;
        case Gauge::Kind::log_geometric: out.is_dini = true; break;
        case Gauge::Kind::log_inverse: out.is_dini = false; break;
        default: {
            // ratio comparison of the trailing terms
            out.is_dini = true;
            std::size_t m = terms.size();
            if (m < 2) { out.is_dini = false; break; }
            std::size_t first = m > 8 ? m - 8 : 1;
            for (std::size_t k = first; k < m; ++k) {
                if (terms[k - 1] <= 0) continue;
                if (terms[k] / terms[k - 1] > 0.999) { out.is_dini = false; break; }
            }
            break;
        }
    }
    if (out.is_dini && last_j >= 1) {
        try {
            double zeta = mean_slope(g, std::pow(beta, -(last_j)));
            out.tail_bound = beta / (beta - 1.0) * zeta;
        } catch (const std::exception&) {
            out.tail_bound = std::nullopt;
        }
    }
    return out;
}

// The mean slope of a Dini gauge, packaged as a gauge itself.
inline Gauge mean_slope_gauge(const Gauge& g) {
    if (g.kind == Gauge::Kind::geometric)
        return Gauge::geometric(g.a / g.alpha, g.alpha, g.domain_upper);
    if (g.kind == Gauge::Kind::log_inverse)
        throw NonDiniError("mean_slope_gauge: not Dini");
    std::vector<double> rg, zv;
    int n = 64;
    double lo = std::log(1e-9), hi = std::log(g.domain_upper);
    for (int i = 0; i < n; ++i) {
        double r = std::exp(lo + (hi - lo) * i / (n - 1.0));
        if (i == n - 1) r = g.domain_upper;
        rg.push_back(r);
        zv.push_back(mean_slope(g, r));
    }
    for (std::size_t i = 1; i < zv.size(); ++i) zv[i] = std::max(zv[i], zv[i - 1]);
    return Gauge::tabulated(std::move(rg), std::move(zv));
}

}  // namespace wsteiner
