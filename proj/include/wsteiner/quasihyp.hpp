#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/gauges.hpp"
#include "wsteiner/modulus.hpp"
#include "wsteiner/networks.hpp"
#include "wsteiner/solver.hpp"
#include "wsteiner/weights.hpp"

namespace wsteiner {

struct QuasihypResult {
    double distance = 0;
    Polyline geodesic;
    double eta = 0;           // min h along the geodesic: Gamma subset D_eta
    double length_bound = 0;  // a-priori bound h(x0) e^M on the H^1 length
    int iterations = 0;
    std::vector<std::string> flags;
};

// min h over the geodesic. h is concave along segments for the supported
// domain kinds, so the minimum sits at the vertices.
inline double geodesic_margin(const Domain& d, const Polyline& pl) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : pl.points) m = std::min(m, boundary_distance(d, v));
    return m;
}

inline QuasihypResult quasihyp_distance(const Domain& d, const Vec& x0, const Vec& y0,
                                        const SolveParams& params) {
    if (!domain_contains(d, x0) || !domain_contains(d, y0))
        throw std::invalid_argument("quasihyp_distance: endpoints must be interior to the domain");
    WeightField w = WeightField::inverse_boundary_distance(d);
    GeodesicResult g = geodesic_solve(x0, y0, w, d.norm, params);
    QuasihypResult out;
    out.distance = g.objective;
    out.geodesic = std::move(g.polyline);
    out.iterations = g.iterations;
    out.flags = std::move(g.flags);
    out.eta = geodesic_margin(d, out.geodesic);
    out.length_bound = boundary_distance(d, x0) * std::exp(out.distance);
    if (!(out.eta > 0)) out.flags.push_back("boundary_margin_nonpositive");
    return out;
}

struct RegularityReport {
    double fitted_constant = 0;   // smallest C >= 1 with osc(eta') <= C omega(C eta')
    double osc_exponent = 0;      // log-log slope of the measured secant oscillation
    bool bound_holds = false;     // a finite C <= 100 exists
    double eta = 0;               // boundary margin of the instance
    double omega_exponent = 0;    // log-log slope of omega on its power regime
    std::vector<double> scales, oscillations, bounds;
};

namespace detail {

template <class OmegaFn>
bool c1_bound_holds(const std::vector<double>& eta, const std::vector<double>& osc,
                    OmegaFn&& omega, double C) {
    for (std::size_t k = 0; k < eta.size(); ++k)
        if (osc[k] > C * omega(C * eta[k]) + 1e-12) return false;
    return true;
}

template <class OmegaFn>
double fit_c1_constant(const std::vector<double>& eta, const std::vector<double>& osc,
                       OmegaFn&& omega, double cmax = 100.0) {
    if (c1_bound_holds(eta, osc, omega, 1.0)) return 1.0;
    if (!c1_bound_holds(eta, osc, omega, cmax)) return std::numeric_limits<double>::infinity();
    double lo = 1.0, hi = cmax;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (c1_bound_holds(eta, osc, omega, mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace detail

// Checks the C^1 modulus of a quasihyperbolic geodesic: builds the
// almost-minimality gauge xi(r) = r eta^{-2} (a+b)/a^2 from the Lipschitz
// bound on 1/h over D_eta, composes omega = mean slope of delta^{-1} o xi,
// and verifies osc(gamma'; eta') <= C omega(C eta') over dyadic eta'.
inline RegularityReport quasihyp_regularity_report(const Polyline& geodesic, const Domain& d,
                                                   const ModulusCurve& modulus) {
    if (geodesic.points.size() < 4)
        throw std::invalid_argument("quasihyp_regularity_report: geodesic has < 4 vertices");
    RegularityReport rep;
    rep.eta = geodesic_margin(d, geodesic);
    if (!(rep.eta > 0))
        throw std::invalid_argument("quasihyp_regularity_report: geodesic touches the boundary");
    double h_max = 0;
    for (const auto& v : geodesic.points) h_max = std::max(h_max, boundary_distance(d, v));
    double a = 1.0 / h_max, b = 1.0 / rep.eta;
    double K = (a + b) / (a * a);
    double lip = 1.0 / (rep.eta * rep.eta);
    double L = geodesic.total_length();
    double r0 = std::min(1.0, L);
    Gauge xi = Gauge::geometric(std::min(lip * K, 1e6), 1.0, r0);
    Gauge omega_src = Gauge::composed(modulus, xi);
    auto omega = [&](double r) { return mean_slope(omega_src, std::min(r, r0)); };

    // omega's exponent, fitted on its small-r power regime
    {
        std::vector<double> rs, ws;
        for (int k = 8; k <= 16; ++k) {
            double r = std::pow(2.0, -k);
            if (r > r0) continue;
            rs.push_back(r);
            ws.push_back(omega(r));
        }
        rep.omega_exponent = fit_loglog_exponent(rs, ws);
    }

    for (int k = 3; k <= 8; ++k) {
        double eta_k = std::pow(2.0, -k);
        if (eta_k > L / 4) continue;
        rep.scales.push_back(eta_k);
        rep.oscillations.push_back(tangent_oscillation(geodesic, eta_k));
    }
    rep.fitted_constant = detail::fit_c1_constant(rep.scales, rep.oscillations, omega);
    rep.bound_holds = std::isfinite(rep.fitted_constant);
    for (std::size_t k = 0; k < rep.scales.size(); ++k) {
        double C = rep.bound_holds ? rep.fitted_constant : 100.0;
        rep.bounds.push_back(C * omega(C * rep.scales[k]));
    }
    int positive = 0;
    for (double o : rep.oscillations) positive += o > 0;
    rep.osc_exponent = positive >= 2 ? fit_loglog_exponent(rep.scales, rep.oscillations) : 0.0;
    return rep;
}

}  // namespace wsteiner
