#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/norms.hpp"

namespace wsteiner {

struct SearchParams {
    int coarse_angles = 2048;   // theta grid on the unit circle
    double refine_tol = 1e-8;   // golden-section tolerance on angles
    int sections = 256;         // random 2-D sections for dim > 2
    std::uint64_t seed = 42;
};

// Tabulated modulus of uniform rotundity delta_X on an ascending eps grid.
struct ModulusCurve {
    std::vector<double> eps_grid;
    std::vector<double> delta_values;
    NormSpec norm;

    void validate() const {
        if (eps_grid.size() != delta_values.size() || eps_grid.empty())
            throw std::invalid_argument("ModulusCurve: grid/value size mismatch");
        for (std::size_t i = 0; i < eps_grid.size(); ++i) {
            if (eps_grid[i] <= 0 || eps_grid[i] > 2.0 + 1e-12)
                throw std::invalid_argument("ModulusCurve: eps out of (0,2]");
            if (delta_values[i] < -1e-12 || delta_values[i] > 1.0 + 1e-12)
                throw std::invalid_argument("ModulusCurve: delta out of [0,1]");
            if (i > 0 && eps_grid[i] <= eps_grid[i - 1])
                throw std::invalid_argument("ModulusCurve: eps grid not ascending");
            if (i > 0 && delta_values[i] < delta_values[i - 1] - 1e-12)
                throw std::invalid_argument("ModulusCurve: delta not nondecreasing");
            if (delta_values[i] > eps_grid[i] * eps_grid[i] + 1e-9)
                throw std::invalid_argument("ModulusCurve: delta exceeds eps^2");
        }
    }

    // Piecewise-constant-from-the-left evaluation: a lower envelope of the
    // tabulated curve, so inequality checks fed from it stay sound.
    double lower_eval(double eps) const {
        if (eps < eps_grid.front()) return 0.0;
        auto it = std::upper_bound(eps_grid.begin(), eps_grid.end(), eps);
        std::size_t k = static_cast<std::size_t>(it - eps_grid.begin());
        return delta_values[k - 1];
    }
};

namespace detail {

// First angular offset phi in (0, pi] at which the chord from points[i]
// reaches eps, located on the cached grid then sharpened by bisection.
// Chord length along the circle grows from 0 to 2 (antipode); plateaus are
// handled by taking the first crossing.
template <class Norm2, class Point>
std::optional<double> first_chord_crossing(Norm2& n2, Point& point, const Vec& x,
                                           double theta, double eps) {
    if (eps <= 0) return 0.0;
    const int stride = 16, fine = 16, steps = 1024;  // covers (0, pi]
    const double dphi = M_PI / steps;
    auto chord = [&](double phi) {
        Vec y = point(theta + phi);
        return n2(x[0] - y[0], x[1] - y[1]);
    };
    int hi_block = -1;
    double prev = 0.0;
    for (int k = stride; k <= steps; k += stride) {
        double c = chord(k * dphi);
        if (c >= eps) { hi_block = k; break; }
        prev = c;
    }
    (void)prev;
    if (hi_block < 0) {
        // antipode has chord exactly 2; accept eps within roundoff of 2
        if (eps <= 2.0 + 1e-9 && chord(M_PI) >= eps - 1e-12) return M_PI;
        return std::nullopt;
    }
    double lo = (hi_block - stride) * dphi, hi = hi_block * dphi;
    double width = (hi - lo) / fine;
    for (int k = 1; k <= fine; ++k) {
        double phi = lo + k * width;
        if (chord(phi) >= eps) { hi = phi; lo = phi - width; break; }
    }
    return bisect_root([&](double phi) { return chord(phi) - eps; }, lo, hi, 1e-13);
}

// delta for a generic 2-D norm given as n2(x, y). The search walks a theta
// grid of first points, pairs each with the eps-chord partner, and refines
// the best pair by golden section, per the brute-force scheme.
template <class Norm2>
double modulus2d(Norm2&& n2, double eps, const SearchParams& sp) {
    if (!(eps > 0) || eps > 2.0 + 1e-12)
        throw std::invalid_argument("modulus_of_convexity: eps must lie in (0,2]");
    eps = std::min(eps, 2.0);
    auto point = [&](double theta) {
        double c = std::cos(theta), s = std::sin(theta);
        double n = n2(c, s);
        return Vec{c / n, s / n};
    };
    auto depth_at = [&](double theta) {
        Vec x = point(theta);
        auto phi = first_chord_crossing(n2, point, x, theta, eps);
        if (!phi) return std::numeric_limits<double>::infinity();
        Vec y = point(theta + *phi);
        return 1.0 - n2(0.5 * (x[0] + y[0]), 0.5 * (x[1] + y[1]));
    };
    const int n = sp.coarse_angles;
    double best = std::numeric_limits<double>::infinity();
    double best_theta = 0;
    for (int i = 0; i < n; ++i) {
        double theta = 2.0 * M_PI * i / n;
        double d = depth_at(theta);
        if (d < best) { best = d; best_theta = theta; }
    }
    double step = 2.0 * M_PI / n;
    double refined = depth_at(golden_min(depth_at, best_theta - step, best_theta + step,
                                         sp.refine_tol));
    best = std::min(best, refined);
    return std::min(1.0, std::max(0.0, best));
}

}  // namespace detail

// Modulus of uniform rotundity delta_X(eps), restricted to unit vectors.
// For dim > 2 the value is the minimum over sampled 2-D sections through the
// origin (all coordinate planes plus random ones) -- an upper bound on
// delta_X in general, exact for the lp family by symmetry.
inline double modulus_of_convexity(const NormSpec& spec, double eps,
                                   const SearchParams& sp = {}) {
    if (!(eps > 0) || eps > 2.0 + 1e-12)
        throw std::invalid_argument("modulus_of_convexity: eps must lie in (0,2]");
    if (spec.dim == 2) {
        auto n2 = [&](double a, double b) { return norm_eval(spec, Vec{a, b}); };
        return detail::modulus2d(n2, eps, sp);
    }
    Rng rng = Rng(sp.seed).stream("modulus-sections");
    double best = std::numeric_limits<double>::infinity();
    auto section_value = [&](const Vec& u, const Vec& v) {
        auto n2 = [&](double a, double b) {
            Vec x(spec.dim);
            for (int i = 0; i < spec.dim; ++i) x[i] = a * u[i] + b * v[i];
            return norm_eval(spec, x);
        };
        return detail::modulus2d(n2, eps, sp);
    };
    for (int i = 0; i < spec.dim; ++i)
        for (int j = i + 1; j < spec.dim; ++j) {
            Vec u(spec.dim, 0.0), v(spec.dim, 0.0);
            u[i] = 1.0; v[j] = 1.0;
            best = std::min(best, section_value(u, v));
        }
    for (int s = 0; s < sp.sections; ++s) {
        Vec u(spec.dim), v(spec.dim);
        for (int i = 0; i < spec.dim; ++i) { u[i] = rng.uniform(-1, 1); v[i] = rng.uniform(-1, 1); }
        double nu = euclid(u);
        if (nu < 1e-6) continue;
        u = scale(u, 1.0 / nu);
        double proj = dot(v, u);
        for (int i = 0; i < spec.dim; ++i) v[i] -= proj * u[i];
        double nv = euclid(v);
        if (nv < 1e-6) continue;
        v = scale(v, 1.0 / nv);
        best = std::min(best, section_value(u, v));
    }
    return best;
}

inline std::vector<double> linear_eps_grid(int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = 2.0 * (i + 1) / n;
    return g;
}

inline std::vector<double> log_eps_grid(double eps_min, int n) {
    std::vector<double> g(n);
    double l0 = std::log(eps_min), l1 = std::log(2.0);
    for (int i = 0; i < n; ++i) g[i] = std::exp(l0 + (l1 - l0) * i / (n - 1.0));
    g.back() = 2.0;
    return g;
}

inline ModulusCurve build_modulus_curve(const NormSpec& spec,
                                        const std::vector<double>& eps_grid,
                                        const SearchParams& sp = {}) {
    ModulusCurve curve;
    curve.norm = spec;
    curve.eps_grid = eps_grid;
    curve.delta_values.resize(eps_grid.size());
    for (std::size_t i = 0; i < eps_grid.size(); ++i)
        curve.delta_values[i] = modulus_of_convexity(spec, eps_grid[i], sp);
    // The search overestimates the infimum; a right-to-left running min keeps
    // every entry an overestimate while restoring monotonicity.
    for (std::size_t i = curve.delta_values.size(); i-- > 1;)
        curve.delta_values[i - 1] = std::min(curve.delta_values[i - 1], curve.delta_values[i]);
    curve.validate();
    return curve;
}

// delta_X^{-1}(t) = sup{eps > 0 : delta_X(eps) <= t}, capped at 2, by
// monotone log-log interpolation on the tabulated curve.
inline double modulus_inverse(const ModulusCurve& curve, double t) {
    if (!(t > 0)) throw std::invalid_argument("modulus_inverse: t must be > 0");
    curve.validate();
    const auto& e = curve.eps_grid;
    const auto& d = curve.delta_values;
    std::size_t n = e.size();
    if (d.back() <= t) return 2.0;
    std::size_t k = 0;
    while (k < n && d[k] <= t) ++k;  // first index with d[k] > t
    if (k == 0) {
        // below the resolved grid: extend the head power law downward
        std::size_t j = 0;
        while (j + 1 < n && d[j + 1] <= d[0] * (1 + 1e-12)) ++j;
        if (j + 1 >= n || d[0] <= 0) return e[0] * t / std::max(d[0], 1e-300);
        double s = std::log(d[j + 1] / d[0]) / std::log(e[j + 1] / e[0]);
        if (!(s > 0)) return e[0];
        return std::min(2.0, e[0] * std::pow(t / d[0], 1.0 / s));
    }
    double e0 = e[k - 1], d0 = d[k - 1], e1 = e[k], d1 = d[k];
    if (d0 <= 0)  // linear from the last zero entry
        return std::min(2.0, e0 + (t / d1) * (e1 - e0));
    double s = std::log(d1 / d0) / std::log(e1 / e0);
    if (!(s > 0)) return std::min(2.0, e1);
    return std::min(2.0, e0 * std::pow(t / d0, 1.0 / s));
}

// Directional (local) modulus delta_X(v; eps) in 2-D rotund spaces:
// inf{1 - ||v + h/2|| : ||v+h|| <= 1, ||h|| >= eps}. The objective is a norm,
// so the infimum of the depth sits on the boundary of the feasible region;
// both boundary families are searched as 1-D problems.
inline double local_modulus(const NormSpec& spec, const Vec& v, double eps,
                            const SearchParams& sp = {}) {
    if (spec.dim != 2) throw std::invalid_argument("local_modulus: dim must be 2");
    if (!spec.rotund()) throw std::domain_error("local_modulus: norm must be rotund");
    if (!(eps > 0) || eps > 1.0 + 1e-12)
        throw std::invalid_argument("local_modulus: eps must lie in (0,1]");
    if (std::abs(norm_eval(spec, v) - 1.0) > 1e-12)
        throw std::invalid_argument("local_modulus: v must be a unit vector");

    auto n2 = [&](double a, double b) { return norm_eval(spec, Vec{a, b}); };
    auto point = [&](double theta) {
        double c = std::cos(theta), s = std::sin(theta);
        double n = n2(c, s);
        return Vec{c / n, s / n};
    };
    double theta_v = std::atan2(v[1], v[0]);
    double best = std::numeric_limits<double>::infinity();

    // family 1: the partner stays on the unit circle, chord constraint active
    for (double sign : {1.0, -1.0}) {
        auto pt = [&](double theta) { return point(theta_v + sign * (theta - theta_v)); };
        auto phi = detail::first_chord_crossing(n2, pt, v, theta_v, eps);
        if (phi) {
            Vec y = pt(theta_v + *phi);
            best = std::min(best, 1.0 - n2(0.5 * (v[0] + y[0]), 0.5 * (v[1] + y[1])));
        }
    }

    // family 2: ||h|| = eps with v+h strictly inside the ball
    auto depth_inner = [&](double psi) {
        Vec s = point(psi);
        Vec y{v[0] + eps * s[0], v[1] + eps * s[1]};
        if (n2(y[0], y[1]) > 1.0) return std::numeric_limits<double>::infinity();
        return 1.0 - n2(0.5 * (v[0] + y[0]), 0.5 * (v[1] + y[1]));
    };
    const int scan = 256;
    double best_psi = 0;
    double best_inner = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan; ++i) {
        double psi = 2.0 * M_PI * i / scan;
        double d = depth_inner(psi);
        if (d < best_inner) { best_inner = d; best_psi = psi; }
    }
    if (std::isfinite(best_inner)) {
        double step = 2.0 * M_PI / scan;
        double psi = golden_min(depth_inner, best_psi - step, best_psi + step, sp.refine_tol);
        best = std::min({best, best_inner, depth_inner(psi)});
    }
    return std::max(0.0, best);
}

// Second derivative at t = 0 of t -> ||v + t e_v||, where e_v spans the
// tangent line of the unit circle at v. Central differences with one
// Richardson step; the noise floor is far below the G-membership threshold.
inline double tangent_second_derivative(const NormSpec& spec, const Vec& v) {
    if (spec.dim != 2)
        throw std::invalid_argument("tangent_second_derivative: dim must be 2");
    if (!spec.smooth())
        throw std::domain_error("tangent_second_derivative: needs lp with p >= 2 or euclidean");
    if (std::abs(norm_eval(spec, v) - 1.0) > 1e-12)
        throw std::invalid_argument("tangent_second_derivative: v must be a unit vector");
    Vec g = norm_gradient(spec, v);
    Vec e{-g[1], g[0]};
    e = scale(e, 1.0 / norm_eval(spec, e));
    auto d2 = [&](double h) {
        Vec a{v[0] + h * e[0], v[1] + h * e[1]};
        Vec b{v[0] - h * e[0], v[1] - h * e[1]};
        return (norm_eval(spec, a) - 2.0 + norm_eval(spec, b)) / (h * h);
    };
    double h = 1e-3;
    double r = (4.0 * d2(h / 2) - d2(h)) / 3.0;
    return std::max(0.0, r);
}

// Threshold for G = {v : D^2 f(v)(e_v, e_v) > 0} membership.
inline constexpr double kGMembershipThreshold = 1e-6;

inline bool in_tangent_curvature_set(const NormSpec& spec, const Vec& v) {
    return tangent_second_derivative(spec, v) > kGMembershipThreshold;
}

}  // namespace wsteiner
