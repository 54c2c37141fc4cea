#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "wsteiner/modulus.hpp"
#include "wsteiner/networks.hpp"
#include "wsteiner/quasihyp.hpp"
#include "wsteiner/solver.hpp"
#include "wsteiner/verify.hpp"
#include "wsteiner/weights.hpp"

namespace wsteiner {

// Modulus curves are expensive; share them across checks. Content depends
// only on (norm, grid, search), so caching cannot break determinism.
inline const ModulusCurve& shared_curve(const NormSpec& spec, int coarse_angles = 512) {
    static std::map<std::tuple<int, double, int, int>, ModulusCurve> cache;
    static std::mutex mu;
    auto key = std::make_tuple(static_cast<int>(spec.family), spec.exponent(), spec.dim,
                               coarse_angles);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    SearchParams sp;
    sp.coarse_angles = coarse_angles;
    ModulusCurve curve = build_modulus_curve(spec, log_eps_grid(1e-4, 112), sp);
    return cache.emplace(key, std::move(curve)).first->second;
}

// ------------------------------------------------------------- scenarios

struct HolderGeodesicScenario {
    WeightField weight;
    GeodesicResult solution;
    Vec window_center;
    Gauge xi;  // window-local almost-minimality gauge
    NormSpec norm;
};

// Converged geodesics for Holder weights w = c + a ||x - anchor||^alpha,
// with the oscillation-envelope gauge built from bounds on a tube around the curve.
inline HolderGeodesicScenario make_holder_geodesic_uncached(int idx, int segments = 256,
                                                            std::uint64_t seed = 42) {
    struct Cfg {
        double p;  // 0 = euclidean
        Vec x0, x1, anchor;
        double a, alpha;
    };
    static const std::vector<Cfg> cfgs = {
        {0.0, {-0.6, 0.0}, {0.6, 0.0}, {0.1, 0.35}, 1.0, 0.5},
        {3.0, {-0.5, -0.2}, {0.7, 0.1}, {0.0, 0.4}, 0.8, 0.5},
        {4.0, {-0.7, 0.1}, {0.5, -0.1}, {-0.2, 0.3}, 1.0, 0.7},
        {1.5, {-0.6, -0.1}, {0.6, 0.2}, {0.2, -0.4}, 0.6, 0.5},
        {0.0, {-0.55, 0.15}, {0.65, -0.15}, {0.05, 0.5}, 1.2, 1.0},
    };
    const Cfg& c = cfgs[idx % cfgs.size()];
    HolderGeodesicScenario sc;
    sc.norm = c.p == 0.0 ? NormSpec::Euclidean(2) : NormSpec::Lp(c.p, 2);
    sc.weight = WeightField::holder(1.0, c.a, c.alpha, c.anchor, sc.norm);
    // finite upper bound over the confinement ball B(x0, R)
    double chord_w = weighted_edge_length(sc.weight, sc.norm, c.x0, c.x1);
    double R = (1.0 + chord_w) / sc.weight.bound_lo;
    double dmax = norm_dist(sc.norm, c.x0, c.anchor) + R;
    sc.weight.bound_hi = 1.0 + c.a * std::pow(dmax, c.alpha);

    SolveParams params;
    params.initial_segments = 16;
    int rounds = 0;
    while ((16 << rounds) < segments) ++rounds;
    params.refine_rounds = rounds;
    params.step_tolerance = 2e-5;
    params.seed = seed;
    sc.solution = geodesic_solve(c.x0, c.x1, sc.weight, sc.norm, params);
    sc.window_center = sc.solution.polyline.at_arclength(sc.solution.polyline.total_length() / 2);

    double rmax = 0.3;
    auto [a_lo, b_hi] = weight_bounds_on_ball(sc.weight, sc.window_center, 2 * rmax);
    double K = (a_lo + b_hi) / (a_lo * a_lo);
    sc.xi = Gauge::geometric(c.a * K, c.alpha, 2 * rmax);
    return sc;
}

struct HyperbolicGeodesicScenario {
    Domain domain;
    QuasihypResult solution;
    Gauge xi;  // xi(r) = r * Lip(1/h on D_eta) * (a+b)/a^2
    NormSpec norm;
};

// Quasihyperbolic geodesics on the truncated upper half-plane.
inline HyperbolicGeodesicScenario make_hyperbolic_geodesic_uncached(const NormSpec& norm, int idx,
                                                                    int segments = 256,
                                                                    std::uint64_t seed = 42) {
    struct Cfg { Vec x0, x1; };
    static const std::vector<Cfg> cfgs = {
        {{-1.0, 1.0}, {1.0, 1.0}},
        {{-0.8, 0.9}, {0.9, 1.2}},
        {{-1.2, 1.1}, {0.7, 0.8}},
    };
    const Cfg& c = cfgs[idx % cfgs.size()];
    HyperbolicGeodesicScenario sc;
    sc.norm = norm;
    sc.domain = Domain::half_plane_window(16.0, 100.0, norm);
    SolveParams params;
    params.initial_segments = 16;
    int rounds = 0;
    while ((16 << rounds) < segments) ++rounds;
    params.refine_rounds = rounds;
    params.step_tolerance = 2e-5;
    params.seed = seed;
    sc.solution = quasihyp_distance(sc.domain, c.x0, c.x1, params);

    double eta = sc.solution.eta;
    double h_max = 0;
    for (const auto& v : sc.solution.geodesic.points)
        h_max = std::max(h_max, boundary_distance(sc.domain, v));
    double a = 1.0 / h_max, b = 1.0 / eta;
    double K = (a + b) / (a * a);
    sc.xi = Gauge::geometric(K / (eta * eta), 1.0, 1.0);
    return sc;
}

// Solved scenarios are pure functions of their arguments; cache them so the
// suite and the acceptance harness reuse one solve per instance.
inline const HolderGeodesicScenario& make_holder_geodesic(int idx, int segments = 256,
                                                          std::uint64_t seed = 42) {
    static std::map<std::tuple<int, int, std::uint64_t>, HolderGeodesicScenario> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(idx, segments, seed);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, make_holder_geodesic_uncached(idx, segments, seed)).first;
    return it->second;
}

inline const HyperbolicGeodesicScenario& make_hyperbolic_geodesic(const NormSpec& norm, int idx,
                                                                  int segments = 256,
                                                                  std::uint64_t seed = 42) {
    static std::map<std::tuple<double, int, int, std::uint64_t>, HyperbolicGeodesicScenario> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(norm.exponent(), idx, segments, seed);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, make_hyperbolic_geodesic_uncached(norm, idx, segments, seed))
                 .first;
    return it->second;
}

// Windows centered on the curve, clear of the endpoints.
inline std::vector<std::pair<Vec, double>> windows_on_polyline(const Polyline& pl,
                                                               const std::vector<double>& radii) {
    std::vector<std::pair<Vec, double>> out;
    double L = pl.total_length();
    for (double r : radii) {
        Vec x = pl.at_arclength(L / 2);
        if (r < L / 2 - 1e-6) out.emplace_back(x, r);
    }
    return out;
}

// Equilateral-triangle Steiner solve; branch point lands at the Fermat point.
inline SteinerResult make_fermat_network(std::uint64_t seed = 42) {
    std::vector<Vec> t = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}};
    NormSpec eu = NormSpec::Euclidean(2);
    WeightField w = WeightField::constant(1.0, eu);
    SolveParams params;
    params.initial_segments = 1;
    params.refine_rounds = 0;
    params.step_tolerance = 1e-9;
    params.seed = seed;
    return steiner_solve(t, w, eu, params);
}

// Planted violation instance for the height bound: a central bump of height
// r/2 paired with a near-zero gauge.
inline Polyline make_planted_bump() {
    Polyline pl;
    pl.norm = NormSpec::Euclidean(2);
    pl.points = {{-1.0, 0.0}, {-0.2, 0.0}, {0.0, 0.125}, {0.2, 0.0}, {1.0, 0.0}};
    return pl;
}

// Planted violation for almost minimality: a zigzag path under w = 1.
inline Polyline make_planted_zigzag() {
    Polyline pl;
    pl.norm = NormSpec::Euclidean(2);
    for (int k = 0; k <= 10; ++k) {
        double x = 0.1 * k;
        double y = (k % 2 == 1) ? 0.03 : 0.0;
        pl.points.push_back({x, y});
    }
    return pl;
}

// --------------------------------------------------------------- the suite

struct SuiteTask {
    std::string name;
    bool expect_flagged = false;  // counterexample tasks must report violations
    std::function<VerificationReport(std::uint64_t seed)> run;
};

inline std::vector<SuiteTask> default_suite() {
    std::vector<SuiteTask> tasks;

    for (double p : {1.5, 0.0, 4.0}) {
        NormSpec spec = p == 0.0 ? NormSpec::Euclidean(2) : NormSpec::Lp(p, 2);
        std::string name = p == 0.0 ? "excess_length_euclidean"
                                    : "excess_length_p" + std::to_string(p).substr(0, 3);
        tasks.push_back({name, false, [spec](std::uint64_t seed) {
                             return check_excess_length(spec, shared_curve(spec), 2000, seed);
                         }});
    }

    tasks.push_back({"monotonicity_tripod", false, [](std::uint64_t) {
        Network tripod;
        tripod.norm = NormSpec::Euclidean(2);
        tripod.vertices = {{0.0, 0.0}, {1.0, 0.0}, {-0.5, 0.8}, {-0.5, -0.9}};
        tripod.edges = {{0, 1}, {0, 2}, {0, 3}};
        tripod.terminals = {1, 2, 3};
        Gauge zero = Gauge::geometric(0.0, 1.0, 1.0);
        return check_monotonicity(tripod, zero, {0.0, 0.0},
                                  {0.05, 0.1, 0.2, 0.4, 0.7});
    }});

    tasks.push_back({"monotonicity_holder_geodesic", false, [](std::uint64_t seed) {
        auto sc = make_holder_geodesic(0, 256, seed);
        std::vector<double> radii;
        for (int k = 7; k >= 2; --k) radii.push_back(std::pow(2.0, -k));
        return check_monotonicity(as_network(sc.solution.polyline), sc.xi, sc.window_center,
                                  radii);
    }});

    tasks.push_back({"density_dichotomy_segment", false, [](std::uint64_t) {
        Network seg;
        seg.norm = NormSpec::Euclidean(2);
        seg.vertices = {{0.0, 0.0}, {1.0, 0.0}};
        seg.edges = {{0, 1}};
        seg.terminals = {0, 1};
        return check_density_dichotomy(seg, 12);
    }});

    tasks.push_back({"density_dichotomy_fermat", false, [](std::uint64_t seed) {
        auto fermat = make_fermat_network(seed);
        return check_density_dichotomy(fermat.network, 16);
    }});

    tasks.push_back({"height_bound_hyperbolic", false, [](std::uint64_t seed) {
        auto sc = make_hyperbolic_geodesic(NormSpec::Euclidean(2), 0, 256, seed);
        std::vector<double> radii;
        for (int k = 6; k >= 2; --k) radii.push_back(std::pow(2.0, -k));
        auto windows = windows_on_polyline(sc.solution.geodesic, radii);
        return check_height_bound(sc.solution.geodesic, sc.xi, shared_curve(sc.norm), windows);
    }});

    tasks.push_back({"height_bound_planted", true, [](std::uint64_t) {
        Polyline bump = make_planted_bump();
        Gauge tiny = Gauge::geometric(1e-6, 1.0, 1.0);
        NormSpec eu = NormSpec::Euclidean(2);
        std::vector<std::pair<Vec, double>> windows = {{{0.0, 0.0}, 0.25}};
        return check_height_bound(bump, tiny, shared_curve(eu), windows);
    }});

    tasks.push_back({"almost_minimality_holder_geodesic", false, [](std::uint64_t seed) {
        auto sc = make_holder_geodesic(1, 256, seed);
        std::vector<double> radii = {0.05, 0.1, 0.2};
        auto windows = windows_on_polyline(sc.solution.polyline, radii);
        return check_almost_minimality(as_network(sc.solution.polyline), sc.weight, windows,
                                       HubStrategy::best_of_k, seed);
    }});

    tasks.push_back({"almost_minimality_planted", true, [](std::uint64_t seed) {
        Polyline zig = make_planted_zigzag();
        NormSpec eu = NormSpec::Euclidean(2);
        WeightField w = WeightField::constant(1.0, eu);
        std::vector<std::pair<Vec, double>> windows = {{{0.5, 0.0}, 0.25}};
        return check_almost_minimality(as_network(zig), w, windows, HubStrategy::center, seed);
    }});

    tasks.push_back({"c1_modulus_hyperbolic", false, [](std::uint64_t seed) {
        auto sc = make_hyperbolic_geodesic(NormSpec::Euclidean(2), 0, 256, seed);
        Gauge omega = mean_slope_gauge(Gauge::composed(shared_curve(sc.norm), sc.xi));
        return check_c1_modulus(sc.solution.geodesic, omega);
    }});

    tasks.push_back({"local_modulus_regularity_p4", false, [](std::uint64_t) {
        return check_local_modulus_regularity(NormSpec::Lp(4.0, 2), 144);
    }});

    return tasks;
}

struct SuiteOutcome {
    std::vector<VerificationReport> reports;
    std::vector<bool> expected_flagged;
    bool pass = true;
};

// exit convention: a plain task passes with zero violations; a planted
// counterexample task passes only if the check flags it.
inline bool task_outcome_ok(const SuiteTask& task, const VerificationReport& rep) {
    return task.expect_flagged ? rep.violations > 0 : rep.violations == 0;
}

}  // namespace wsteiner
