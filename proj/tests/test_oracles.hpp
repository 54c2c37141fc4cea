#pragma once

// Test-only oracles, independent of the library search paths they check.

#include <cmath>
#include <vector>

#include "wsteiner/norms.hpp"

namespace wsteiner::oracle {

// Closed-form euclidean modulus: delta(eps) = 1 - sqrt(1 - eps^2/4).
inline double euclid_delta(double eps) { return 1.0 - std::sqrt(1.0 - eps * eps / 4.0); }

// Solve euclid_delta(eps) = t by bisection.
inline double euclid_delta_inverse(double t) {
    if (t >= 1.0) return 2.0;
    double lo = 0, hi = 2;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (euclid_delta(mid) <= t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Dense pair-grid search for delta_X(eps) over unit-circle pairs: a slow,
// direct scheme with no bisection/refinement machinery shared with the
// implementation. Accuracy ~ (2 pi / n)^2 near smooth minima.
inline double brute_force_delta_2d(const NormSpec& spec, double eps, int n = 3000) {
    std::vector<Vec> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = unit_circle_point(spec, 2.0 * M_PI * i / n);
    double best = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (norm_dist(spec, pts[i], pts[j]) < eps) continue;
            double depth = 1.0 - norm_eval(spec, scale(add(pts[i], pts[j]), 0.5));
            if (depth < best) best = depth;
        }
    return best;
}

// Brute-force local modulus: dense scan of y in the unit disk with
// ||y - v|| >= eps, polar sampling.
inline double brute_force_local_modulus(const NormSpec& spec, const Vec& v, double eps,
                                        int n_theta = 2000, int n_rad = 60) {
    double best = 1.0;
    for (int i = 0; i < n_theta; ++i) {
        Vec s = unit_circle_point(spec, 2.0 * M_PI * i / n_theta);
        for (int k = 0; k <= n_rad; ++k) {
            double rho = static_cast<double>(k) / n_rad;
            Vec y = scale(s, rho);
            if (norm_dist(spec, y, v) < eps) continue;
            double depth = 1.0 - norm_eval(spec, scale(add(v, y), 0.5));
            if (depth < best) best = depth;
        }
    }
    return best;
}

}  // namespace wsteiner::oracle
