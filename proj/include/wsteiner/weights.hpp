#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/gauges.hpp"
#include "wsteiner/norms.hpp"

namespace wsteiner {

// Open domain D: a box, a ball, or the upper half-plane truncated to a finite
// window (box [-W/2, W/2] x [0, H] under a different name; the analytic
// hyperbolic oracles are trusted only for centered geodesics of euclidean
// extent < H/4, where the truncation is invisible).
struct Domain {
    enum class Kind { box, ball, half_plane_window };
    Kind kind = Kind::box;
    Vec lo, hi;          // box
    Vec center;          // ball
    double radius = 1.0; // ball
    double height = 1.0, width = 1.0;  // half_plane_window
    NormSpec norm;

    static Domain box(Vec lo, Vec hi, NormSpec norm) {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("Domain::box: lo/hi size mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) throw std::invalid_argument("Domain::box: need lo < hi");
        Domain d; d.kind = Kind::box; d.lo = std::move(lo); d.hi = std::move(hi); d.norm = norm;
        return d;
    }
    static Domain ball(Vec center, double radius, NormSpec norm) {
        if (!(radius > 0)) throw std::invalid_argument("Domain::ball: radius must be > 0");
        Domain d; d.kind = Kind::ball; d.center = std::move(center); d.radius = radius; d.norm = norm;
        return d;
    }
    static Domain half_plane_window(double height, double width, NormSpec norm) {
        if (!(height > 0) || !(width > 0))
            throw std::invalid_argument("Domain::half_plane_window: need positive extents");
        if (norm.dim != 2)
            throw std::invalid_argument("Domain::half_plane_window: dim must be 2");
        Domain d; d.kind = Kind::half_plane_window; d.height = height; d.width = width; d.norm = norm;
        return d;
    }

    // Bounding box of the domain (used by samplers and the grid oracle).
    void bounding_box(Vec& out_lo, Vec& out_hi) const {
        switch (kind) {
            case Kind::box: out_lo = lo; out_hi = hi; return;
            case Kind::ball: {
                // the unit ball of any supported norm contains the inscribed
                // euclidean box scaled by dim^{-1/2}; for bounding use radius
                // in every coordinate (|x_i| <= ||x|| for the lp family)
                out_lo = center; out_hi = center;
                for (std::size_t i = 0; i < center.size(); ++i) {
                    out_lo[i] -= radius;
                    out_hi[i] += radius;
                }
                return;
            }
            case Kind::half_plane_window:
                out_lo = {-width / 2, 0.0};
                out_hi = {width / 2, height};
                return;
        }
        throw std::logic_error("Domain: unknown kind");
    }

    double inradius() const {
        switch (kind) {
            case Kind::box: {
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < lo.size(); ++i) m = std::min(m, (hi[i] - lo[i]) / 2);
                return m;
            }
            case Kind::ball: return radius;
            case Kind::half_plane_window: return std::min(height / 2, width / 2);
        }
        throw std::logic_error("Domain: unknown kind");
    }
};

// h(x) = dist(x, X \ D) in the ambient norm, exact for the three kinds;
// nonpositive outside. Coordinate hyperplane distances equal the coordinate
// gap for every lp norm (the dual functional has norm one).
inline double boundary_distance(const Domain& d, const Vec& x) {
    switch (d.kind) {
        case Domain::Kind::box: {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < d.lo.size(); ++i)
                m = std::min({m, x[i] - d.lo[i], d.hi[i] - x[i]});
            return m;
        }
        case Domain::Kind::ball:
            return d.radius - norm_dist(d.norm, x, d.center);
        case Domain::Kind::half_plane_window:
            return std::min({x[1], d.height - x[1], x[0] + d.width / 2, d.width / 2 - x[0]});
    }
    throw std::logic_error("Domain: unknown kind");
}

inline bool domain_contains(const Domain& d, const Vec& x) {
    return boundary_distance(d, x) > 0;
}

struct Oscillation {
    double value = 0;
    bool sampled = false;  // true when a random lower estimate, not closed form
};

struct WeightField {
    enum class Kind { constant, affine, holder, inverse_boundary_distance };
    Kind kind = Kind::constant;
    double c = 1.0;            // constant value / affine offset / holder base
    Vec gradient;              // affine
    double clamp_min = 1e-9;   // affine
    double a = 1.0;            // holder coefficient
    double alpha = 1.0;        // holder exponent in (0,1]
    Vec anchor;                // holder
    Domain domain;             // inverse_boundary_distance
    bool has_domain = false;
    NormSpec norm;
    double bound_lo = 1.0;     // declared bounds 0 < a_lo <= b_hi <= inf
    double bound_hi = 1.0;

    static WeightField constant(double c, NormSpec norm) {
        if (!(c > 0)) throw std::invalid_argument("WeightField::constant: c must be > 0");
        WeightField w; w.kind = Kind::constant; w.c = c; w.norm = norm;
        w.bound_lo = w.bound_hi = c;
        return w;
    }
    static WeightField affine(Vec gradient, double offset, double clamp_min, NormSpec norm,
                              double bound_hi) {
        if (!(clamp_min > 0)) throw std::invalid_argument("WeightField::affine: clamp_min must be > 0");
        WeightField w; w.kind = Kind::affine; w.gradient = std::move(gradient);
        w.c = offset; w.clamp_min = clamp_min; w.norm = norm;
        w.bound_lo = clamp_min; w.bound_hi = bound_hi;
        return w;
    }
    static WeightField holder(double c, double a, double alpha, Vec anchor, NormSpec norm,
                              double bound_hi = std::numeric_limits<double>::infinity()) {
        if (!(c > 0) || !(a > 0) || !(alpha > 0) || alpha > 1.0)
            throw std::invalid_argument("WeightField::holder: need c, a > 0 and alpha in (0,1]");
        WeightField w; w.kind = Kind::holder; w.c = c; w.a = a; w.alpha = alpha;
        w.anchor = std::move(anchor); w.norm = norm;
        w.bound_lo = c; w.bound_hi = bound_hi;
        return w;
    }
    static WeightField inverse_boundary_distance(Domain d) {
        WeightField w; w.kind = Kind::inverse_boundary_distance;
        w.norm = d.norm; w.domain = std::move(d); w.has_domain = true;
        w.bound_lo = 1.0 / w.domain.inradius();
        w.bound_hi = std::numeric_limits<double>::infinity();
        return w;
    }
};

inline double weight_eval(const WeightField& w, const Vec& x) {
    switch (w.kind) {
        case WeightField::Kind::constant: return w.c;
        case WeightField::Kind::affine: return std::max(w.clamp_min, w.c + dot(w.gradient, x));
        case WeightField::Kind::holder:
            return w.c + w.a * std::pow(norm_dist(w.norm, x, w.anchor), w.alpha);
        case WeightField::Kind::inverse_boundary_distance: {
            double h = boundary_distance(w.domain, x);
            if (h <= 0) throw std::domain_error("weight_eval: point outside the open domain");
            return 1.0 / h;
        }
    }
    throw std::logic_error("WeightField: unknown kind");
}

// +inf instead of throwing outside the domain; descent uses this to reject steps.
inline double weight_eval_or_inf(const WeightField& w, const Vec& x) {
    if (w.kind == WeightField::Kind::inverse_boundary_distance) {
        double h = boundary_distance(w.domain, x);
        return h > 0 ? 1.0 / h : std::numeric_limits<double>::infinity();
    }
    return weight_eval(w, x);
}

namespace detail {

inline double region_diameter(const Domain& region) {
    Vec lo, hi;
    region.bounding_box(lo, hi);
    return norm_eval(region.norm, sub(hi, lo));
}

inline Vec sample_in_domain(const Domain& d, Rng& rng) {
    Vec lo, hi;
    d.bounding_box(lo, hi);
    for (int tries = 0; tries < 4096; ++tries) {
        Vec p = rng.point_in_box(lo, hi);
        if (domain_contains(d, p)) return p;
    }
    throw std::runtime_error("sample_in_domain: rejection sampling failed");
}

}  // namespace detail

// osc(w, r) over the region: closed form where available, otherwise a seeded
// sampled lower estimate over pairs at distance <= r.
inline Oscillation oscillation(const WeightField& w, double r, const Domain& region) {
    if (!(r > 0)) throw std::invalid_argument("oscillation: r must be > 0");
    double diam = detail::region_diameter(region);
    switch (w.kind) {
        case WeightField::Kind::constant: return {0.0, false};
        case WeightField::Kind::affine: {
            double base = dual_norm_eval(w.norm, w.gradient) * std::min(r, diam);
            Vec lo, hi;
            region.bounding_box(lo, hi);
            double sup = w.c, inf = w.c;
            for (std::size_t i = 0; i < lo.size(); ++i) {
                sup += std::max(w.gradient[i] * lo[i], w.gradient[i] * hi[i]);
                inf += std::min(w.gradient[i] * lo[i], w.gradient[i] * hi[i]);
            }
            double cap = std::max(0.0, sup - std::max(inf, w.clamp_min));
            return {std::min(base, cap), false};
        }
        case WeightField::Kind::holder:
            return {w.a * std::pow(std::min(r, diam), w.alpha), false};
        case WeightField::Kind::inverse_boundary_distance: {
            Rng rng(42);  // fixed seed: reproducible sampled estimates
            double best = 0;
            const int pairs = 20000;
            for (int k = 0; k < pairs; ++k) {
                Vec x1 = detail::sample_in_domain(region, rng);
                Vec dir(x1.size());
                for (auto& v : dir) v = rng.uniform(-1, 1);
                double n = norm_eval(w.norm, dir);
                if (n == 0) continue;
                Vec x2 = add(x1, scale(dir, rng.uniform(0, r) / n));
                if (!domain_contains(region, x2)) continue;
                double w1 = weight_eval_or_inf(w, x1), w2 = weight_eval_or_inf(w, x2);
                if (std::isfinite(w1) && std::isfinite(w2))
                    best = std::max(best, std::abs(w1 - w2));
            }
            return {best, true};
        }
    }
    throw std::logic_error("WeightField: unknown kind");
}

// The almost-minimality gauge xi(r) = osc(w, r) (a + b) / a^2 induced by a
// weight with bounds [a, b] on the region.
inline Gauge minimality_gauge(const WeightField& w, const Domain& region) {
    if (!(w.bound_lo > 0) || !std::isfinite(w.bound_hi))
        throw std::domain_error("minimality_gauge: weight bounds must be finite and positive");
    double K = (w.bound_lo + w.bound_hi) / (w.bound_lo * w.bound_lo);
    double diam = detail::region_diameter(region);
    switch (w.kind) {
        case WeightField::Kind::constant:
            return Gauge::geometric(0.0, 1.0, diam);
        case WeightField::Kind::holder:
            return Gauge::geometric(w.a * K, w.alpha, diam);
        default: {
            std::vector<double> rg, xi;
            int n = 64;
            double l0 = std::log(1e-8 * diam), l1 = std::log(diam);
            for (int i = 0; i < n; ++i) {
                double r = std::exp(l0 + (l1 - l0) * i / (n - 1.0));
                if (i == n - 1) r = diam;
                rg.push_back(r);
                xi.push_back(oscillation(w, r, region).value * K);
            }
            for (std::size_t i = 1; i < xi.size(); ++i) xi[i] = std::max(xi[i], xi[i - 1]);
            return Gauge::tabulated(std::move(rg), std::move(xi));
        }
    }
}

// Weight bounds over a ball, closed form per kind (used by the verification
// harness to build window-local gauges).
inline std::pair<double, double> weight_bounds_on_ball(const WeightField& w, const Vec& x,
                                                       double r) {
    switch (w.kind) {
        case WeightField::Kind::constant: return {w.c, w.c};
        case WeightField::Kind::affine: {
            double mid = w.c + dot(w.gradient, x);
            double spread = dual_norm_eval(w.norm, w.gradient) * r;
            return {std::max(w.clamp_min, mid - spread), std::max(w.clamp_min, mid + spread)};
        }
        case WeightField::Kind::holder: {
            double d = norm_dist(w.norm, x, w.anchor);
            double dmin = std::max(0.0, d - r), dmax = d + r;
            return {w.c + w.a * std::pow(dmin, w.alpha), w.c + w.a * std::pow(dmax, w.alpha)};
        }
        case WeightField::Kind::inverse_boundary_distance: {
            double h = boundary_distance(w.domain, x);
            if (h <= r)
                throw std::domain_error("weight_bounds_on_ball: ball reaches the boundary");
            return {1.0 / (h + r), 1.0 / (h - r)};  // h is 1-Lipschitz
        }
    }
    throw std::logic_error("WeightField: unknown kind");
}

}  // namespace wsteiner
