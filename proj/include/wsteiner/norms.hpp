#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "wsteiner/core.hpp"

namespace wsteiner {

enum class NormFamily { lp, linf, euclidean };

// p is restricted to [1.1, 16]; outside that range the brute-force modulus
// searches lose conditioning. p = infinity is the linf family.
struct NormSpec {
    NormFamily family = NormFamily::euclidean;
    double p = 2.0;
    int dim = 2;

    static NormSpec Lp(double p, int dim) { return validated({NormFamily::lp, p, dim}); }
    static NormSpec Linf(int dim) { return validated({NormFamily::linf, 0.0, dim}); }
    static NormSpec Euclidean(int dim) { return validated({NormFamily::euclidean, 2.0, dim}); }

    static NormSpec validated(NormSpec s) {
        if (s.dim < 2) throw std::invalid_argument("NormSpec: dim must be >= 2");
        if (s.family == NormFamily::lp && (s.p < 1.1 || s.p > 16.0))
            throw std::invalid_argument("NormSpec: p must lie in [1.1, 16]");
        return s;
    }

    // lp with 1 < p < infinity (euclidean included); linf is not rotund.
    bool rotund() const { return family != NormFamily::linf; }
    // Smooth enough for tangent second derivatives: p >= 2.
    bool smooth() const {
        return family == NormFamily::euclidean ||
               (family == NormFamily::lp && p >= 2.0);
    }
    double exponent() const { return family == NormFamily::euclidean ? 2.0 : p; }

    bool operator==(const NormSpec& o) const {
        return family == o.family && dim == o.dim &&
               (family == NormFamily::linf || exponent() == o.exponent());
    }
};

namespace detail {

// Works for any q >= 1, independently of the NormSpec support range (the dual
// exponent of a supported p may fall outside [1.1, 16]).
inline double lp_norm_raw(const Vec& x, double q) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    if (m == 0) return 0;
    if (q == 2.0) {
        double s = 0;
        for (double v : x) { double t = v / m; s += t * t; }
        return m * std::sqrt(s);
    }
    double s = 0;
    for (double v : x) s += std::pow(std::abs(v) / m, q);
    return m * std::pow(s, 1.0 / q);
}

inline double linf_norm_raw(const Vec& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace detail

inline double norm_eval(const NormSpec& spec, const Vec& x) {
    if (static_cast<int>(x.size()) != spec.dim)
        throw std::invalid_argument("norm_eval: dimension mismatch");
    if (spec.family == NormFamily::linf) return detail::linf_norm_raw(x);
    return detail::lp_norm_raw(x, spec.exponent());
}

inline double norm_dist(const NormSpec& spec, const Vec& a, const Vec& b) {
    return norm_eval(spec, sub(a, b));
}

// Dual norm, used for closed-form oscillation of affine weights.
inline double dual_norm_eval(const NormSpec& spec, const Vec& x) {
    if (spec.family == NormFamily::linf) return detail::lp_norm_raw(x, 1.0);
    double p = spec.exponent();
    if (p == 1.0) return detail::linf_norm_raw(x);
    return detail::lp_norm_raw(x, p / (p - 1.0));
}

// Point on the unit circle of a 2-D norm in direction theta.
inline Vec unit_circle_point(const NormSpec& spec, double theta) {
    if (spec.dim != 2) throw std::invalid_argument("unit_circle_point: dim must be 2");
    Vec u{std::cos(theta), std::sin(theta)};
    double n = norm_eval(spec, u);
    return scale(u, 1.0 / n);
}

// Gradient of the norm at x != 0 (smooth families only away from axes for
// p < 2; callers restrict to p >= 2 or euclidean).
inline Vec norm_gradient(const NormSpec& spec, const Vec& x) {
    if (spec.family == NormFamily::linf)
        throw std::domain_error("norm_gradient: linf is not smooth");
    double p = spec.exponent();
    double n = norm_eval(spec, x);
    if (n == 0) throw std::domain_error("norm_gradient: zero vector");
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double t = std::abs(x[i]) / n;
        g[i] = (x[i] >= 0 ? 1.0 : -1.0) * std::pow(t, p - 1.0);
    }
    return g;
}

}  // namespace wsteiner
