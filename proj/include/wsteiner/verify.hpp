#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/gauges.hpp"
#include "wsteiner/modulus.hpp"
#include "wsteiner/networks.hpp"
#include "wsteiner/norms.hpp"
#include "wsteiner/weights.hpp"

namespace wsteiner {

// One measured inequality instance. margin >= 0 means the check passed;
// lhs/rhs are oriented per check (see each builder).
struct ReportRow {
    std::string instance;
    double r = 0, lhs = 0, rhs = 0, margin = 0;
    bool pass = true;
};

struct VerificationReport {
    std::string check_name;
    int instances = 0;
    int violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::string, double>> fitted_constants;
    std::string details_path;
    std::vector<ReportRow> rows;

    void add_row(ReportRow row) {
        ++instances;
        if (!row.pass) ++violations;
        worst_margin = std::min(worst_margin, row.margin);
        rows.push_back(std::move(row));
    }
    void finalize() {
        if (!std::isfinite(worst_margin)) worst_margin = 0;
        if (violations > instances) throw std::logic_error("report: violations > instances");
    }
    bool passed() const { return violations == 0; }
};

// ---------------------------------------------------------------------------
// Excess length of a nonstraight path:
// ||x0-z|| + ||z-x1|| >= ||x0-x1|| (1 + delta_X(dist(z, line)/(2(||x0-z||+||z-x1||))))
// on random nondegenerate triangles. The modulus enters through the tabulated
// lower envelope, so reported violations are genuine.
inline VerificationReport check_excess_length(const NormSpec& norm, const ModulusCurve& modulus,
                                              int trials, std::uint64_t seed) {
    if (!norm.rotund()) throw std::domain_error("check_excess_length: norm must be rotund");
    if (trials < 1) throw std::invalid_argument("check_excess_length: trials >= 1");
    VerificationReport rep;
    rep.check_name = "excess_length";
    Rng rng = Rng(seed).stream("excess-length");
    int degenerate = 0;
    for (int k = 0; k < trials; ++k) {
        Vec lo(norm.dim, 0.0), hi(norm.dim, 1.0);
        Vec x0 = rng.point_in_box(lo, hi);
        Vec x1 = rng.point_in_box(lo, hi);
        Vec z = rng.point_in_box(lo, hi);
        double base = norm_dist(norm, x0, x1);
        if (base < 1e-6) { ++degenerate; continue; }
        double h = detail::point_line_dist(norm, z, x0, x1);
        double lhs = norm_dist(norm, x0, z) + norm_dist(norm, z, x1);
        if (h < 1e-9 || lhs < 1e-9) { ++degenerate; continue; }
        double arg = h / (2.0 * lhs);
        double rhs = base * (1.0 + modulus.lower_eval(arg));
        ReportRow row;
        char buf[32];
        std::snprintf(buf, sizeof buf, "t%06d", k);
        row.instance = buf;
        row.r = arg;
        row.lhs = lhs;
        row.rhs = rhs;
        row.margin = lhs - rhs;
        row.pass = lhs >= rhs - 1e-9;
        rep.add_row(std::move(row));
    }
    rep.fitted_constants.emplace_back("degenerate_skipped", degenerate);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Almost monotonicity: exp[zeta(r)] H^1(C cap B(x,r)) / 2r nondecreasing in r.
inline VerificationReport check_monotonicity(const Network& net, const Gauge& xi, const Vec& x,
                                             const std::vector<double>& radii) {
    VerificationReport rep;
    rep.check_name = "monotonicity";
    if (radii.size() < 2) throw std::invalid_argument("check_monotonicity: need >= 2 radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1])
            throw std::invalid_argument("check_monotonicity: radii must ascend");
    std::vector<double> ratio(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double zeta = mean_slope(xi, radii[i]);
        ratio[i] = std::exp(zeta) *
                   length_in_ball(net, Ball{x, radii[i], net.norm}) / (2.0 * radii[i]);
    }
    for (std::size_t i = 1; i < radii.size(); ++i) {
        ReportRow row;
        row.instance = "r" + std::to_string(i);
        row.r = radii[i];
        row.lhs = ratio[i - 1];
        row.rhs = ratio[i];
        row.margin = ratio[i] - ratio[i - 1] * (1.0 - 1e-3);
        row.pass = row.margin >= 0;
        rep.add_row(std::move(row));
    }
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Density dichotomy: the extrapolated density at sampled points is either
// within 0.05 of 1 or at least 1.45. Degree-1 terminals sit outside U and are
// classified separately, not as violations.
inline VerificationReport check_density_dichotomy(const Network& net, int samples) {
    validate_network(net);
    VerificationReport rep;
    rep.check_name = "density_dichotomy";
    std::vector<int> degree(net.vertices.size(), 0);
    for (auto [i, j] : net.edges) { ++degree[i]; ++degree[j]; }

    auto features = [&]() {
        std::vector<Vec> f;
        for (std::size_t v = 0; v < net.vertices.size(); ++v)
            if (degree[v] != 2) f.push_back(net.vertices[v]);
        for (int t : net.terminals) f.push_back(net.vertices[t]);
        return f;
    }();

    auto theta = [&](const Vec& x, double r) {
        return length_in_ball(net, Ball{x, r, net.norm}) / (2.0 * r);
    };
    auto extrapolate = [&](const Vec& x, double r) {
        double t0 = theta(x, r), t1 = theta(x, r / 2), t2 = theta(x, r / 4);
        double d0 = t0 - t1, d1 = t1 - t2;
        if (std::abs(d1) < 1e-12 || d0 * d1 <= 0) return t2;
        double q = d0 / d1;  // = 2^alpha for theta = Theta + c r^alpha
        if (q <= 1.0 + 1e-9) return t2;
        return t2 - d1 / (q - 1.0);
    };

    // sample vertices first, then arclength-uniform interior points
    std::vector<std::pair<Vec, bool>> pts;  // (point, is_degree1_terminal)
    for (std::size_t v = 0; v < net.vertices.size() && static_cast<int>(pts.size()) < samples; ++v)
        pts.emplace_back(net.vertices[v], degree[v] == 1);
    Rng rng(42);
    double total = length(net);
    while (static_cast<int>(pts.size()) < samples) {
        double s = rng.uniform(0.05, 0.95) * total;
        double acc = 0;
        for (auto [i, j] : net.edges) {
            double len = norm_dist(net.norm, net.vertices[i], net.vertices[j]);
            if (acc + len >= s) {
                pts.emplace_back(lerp(net.vertices[i], net.vertices[j], (s - acc) / len), false);
                break;
            }
            acc += len;
        }
    }

    int regular = 0, singular = 0, boundary = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& [x, is_leaf] = pts[k];
        double near = std::numeric_limits<double>::infinity();
        for (const auto& f : features) {
            double d = norm_dist(net.norm, x, f);
            if (d > 1e-9) near = std::min(near, d);
        }
        double r = std::min(0.4 * near, network_diameter(net) / 8);
        if (!(r > 0) || !std::isfinite(r)) continue;
        double est = extrapolate(x, r);
        ReportRow row;
        row.instance = "p" + std::to_string(k);
        row.r = r;
        row.lhs = est;
        if (is_leaf) {
            ++boundary;
            row.rhs = 0.5;
            row.margin = 0.25 - std::abs(est - 0.5);
            row.pass = true;  // outside U: excluded from the dichotomy
            row.instance += ":terminal";
        } else if (std::abs(est - 1.0) <= 0.05) {
            ++regular;
            row.rhs = 1.0;
            row.margin = 0.05 - std::abs(est - 1.0);
            row.pass = true;
        } else if (est >= 1.45) {
            ++singular;
            row.rhs = 1.5;
            row.margin = est - 1.45;
            row.pass = true;
        } else {
            row.rhs = 1.0;
            row.margin = -std::min(std::abs(est - 1.0), std::abs(est - 1.5));
            row.pass = false;
        }
        rep.add_row(std::move(row));
    }
    rep.fitted_constants.emplace_back("regular", regular);
    rep.fitted_constants.emplace_back("singular", singular);
    rep.fitted_constants.emplace_back("terminal", boundary);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Height bound on two-point windows of a curve: the chord satisfies
// chord >= (1 - xi(r)) 2r, and every curve point z in the ball stays within
// 16 r (delta^{-1} o xi)(r) of the line through the center parallel to the
// chord. The height scales with r: h_z / r is what delta^{-1} o xi controls.
inline VerificationReport check_height_bound(const Polyline& geodesic, const Gauge& xi,
                                             const ModulusCurve& modulus,
                                             const std::vector<std::pair<Vec, double>>& windows) {
    VerificationReport rep;
    rep.check_name = "height_bound";
    Network net = as_network(geodesic);
    int wi = 0;
    for (const auto& [x, r] : windows) {
        ++wi;
        auto trace = ball_trace(net, Ball{x, r, net.norm});
        if (trace.size() != 2)
            throw std::invalid_argument("check_height_bound: window trace must have 2 points");
        const Vec& a = trace[0];
        const Vec& b = trace[1];
        double chord = norm_dist(net.norm, a, b);
        double xr = gauge_eval(xi, std::min(r, xi.domain_upper));

        ReportRow rowF;
        rowF.instance = "w" + std::to_string(wi) + ":chord";
        rowF.r = r;
        rowF.lhs = chord;
        rowF.rhs = (1.0 - xr) * 2.0 * r;
        rowF.margin = rowF.lhs - rowF.rhs;
        rowF.pass = rowF.margin >= -1e-9;
        rep.add_row(std::move(rowF));

        // height: max over curve points inside the ball of the distance to
        // the line through the center parallel to the chord. The distance is
        // convex along each sub-segment, so sub-segment endpoints suffice.
        Vec dir = sub(b, a);
        Vec line_b = add(x, dir);
        double height = 0;
        for (std::size_t i = 0; i + 1 < geodesic.points.size(); ++i) {
            auto iv = detail::edge_ball_interval(net.norm, geodesic.points[i],
                                                 geodesic.points[i + 1], x, r);
            if (!iv) continue;
            for (double t : {iv->first, iv->second}) {
                Vec z = lerp(geodesic.points[i], geodesic.points[i + 1], t);
                height = std::max(height, detail::point_line_dist(net.norm, z, x, line_b));
            }
        }
        ReportRow rowG;
        rowG.instance = "w" + std::to_string(wi) + ":height";
        rowG.r = r;
        rowG.lhs = height;
        rowG.rhs = 16.0 * r * modulus_inverse(modulus, std::max(xr, 1e-300));
        rowG.margin = rowG.rhs - rowG.lhs;
        rowG.pass = rowG.margin >= -1e-9;
        rep.add_row(std::move(rowG));
    }
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Almost minimality. The defining inequality compares H^1 masses:
// H^1(C cap B) <= (1 + xi(r)) H^1(C' cap B) for every competitor C'. The
// empirical gauge from the best sampled competitor is tested against the
// oscillation envelope xi(r) = osc(w, r)(a+b)/a^2 with window-local bounds.
// The weighted-length ratio is reported alongside as a diagnostic.
enum class HubStrategy { center, best_of_k };

inline VerificationReport check_almost_minimality(const Network& net, const WeightField& w,
                                                  const std::vector<std::pair<Vec, double>>& windows,
                                                  HubStrategy hub_strategy,
                                                  std::uint64_t seed = 42) {
    VerificationReport rep;
    rep.check_name = "almost_minimality";
    Rng rng = Rng(seed).stream("almost-minimality");
    double weighted_ratio_max = 0, envelope_ratio_max = 0;
    int wi = 0;
    for (const auto& [x, r] : windows) {
        ++wi;
        Ball ball{x, r, net.norm};
        auto trace = ball_trace(net, ball);
        if (trace.empty()) continue;
        double h1_curve = length_in_ball(net, ball);
        double lw_curve = 0;
        for (auto [i, j] : net.edges) {
            auto iv = detail::edge_ball_interval(net.norm, net.vertices[i], net.vertices[j],
                                                 x, r);
            if (!iv) continue;
            Vec pa = lerp(net.vertices[i], net.vertices[j], iv->first);
            Vec pb = lerp(net.vertices[i], net.vertices[j], iv->second);
            double len = norm_dist(net.norm, pa, pb);
            if (len == 0) continue;
            double s = 0;
            for (int k = 0; k < Gauss8::n; ++k)
                s += Gauss8::weight[k] * weight_eval_or_inf(w, lerp(pa, pb, Gauss8::node[k]));
            lw_curve += len * s;
        }

        std::vector<Vec> hubs{x};
        if (hub_strategy == HubStrategy::best_of_k) {
            Vec centroid(x.size(), 0.0);
            for (const auto& z : trace) centroid = add(centroid, z);
            centroid = scale(centroid, 1.0 / static_cast<double>(trace.size()));
            if (norm_dist(net.norm, centroid, x) <= r) hubs.push_back(centroid);
            while (hubs.size() < 17) {
                Vec cand(x.size());
                for (std::size_t d = 0; d < x.size(); ++d) cand[d] = x[d] + rng.uniform(-r, r);
                if (norm_dist(net.norm, cand, x) <= r) hubs.push_back(std::move(cand));
            }
        }
        double best_h1 = std::numeric_limits<double>::infinity();
        double best_lw = std::numeric_limits<double>::infinity();
        auto spider_cost = [&](const Vec& hub) {
            double h1 = 0, lw = 0;
            for (const auto& z : trace) {
                double len = norm_dist(net.norm, hub, z);
                h1 += len;
                double s = 0;
                for (int k = 0; k < Gauss8::n; ++k)
                    s += Gauss8::weight[k] * weight_eval_or_inf(w, lerp(hub, z, Gauss8::node[k]));
                lw += len * s;
            }
            return std::make_pair(h1, lw);
        };
        for (const auto& hub : hubs) {
            auto [h1, lw] = spider_cost(hub);
            best_h1 = std::min(best_h1, h1);
            best_lw = std::min(best_lw, lw);
        }
        if (trace.size() == 2) {  // chord competitor for two-point traces
            double len = norm_dist(net.norm, trace[0], trace[1]);
            double s = 0;
            for (int k = 0; k < Gauss8::n; ++k)
                s += Gauss8::weight[k] *
                     weight_eval_or_inf(w, lerp(trace[0], trace[1], Gauss8::node[k]));
            best_h1 = std::min(best_h1, len);
            best_lw = std::min(best_lw, len * s);
        }
        if (!(best_h1 > 0)) continue;

        double xi_hat = std::max(0.0, h1_curve / best_h1 - 1.0);
        auto [a_lo, b_hi] = weight_bounds_on_ball(w, x, r);
        double osc;
        if (w.kind == WeightField::Kind::inverse_boundary_distance) {
            double h = boundary_distance(w.domain, x);
            if (h <= r) throw std::domain_error("check_almost_minimality: window leaves the domain");
            osc = r / ((h - r) * (h - r));  // Lip(1/h) <= eta^{-2} on D_eta
        } else {
            Vec blo = x, bhi = x;
            for (auto& v : blo) v -= 2 * r;
            for (auto& v : bhi) v += 2 * r;
            osc = oscillation(w, r, Domain::box(blo, bhi, net.norm)).value;
        }
        double xi_theory = osc * (a_lo + b_hi) / (a_lo * a_lo);

        ReportRow row;
        row.instance = "w" + std::to_string(wi);
        row.r = r;
        row.lhs = xi_hat;
        row.rhs = 1.10 * xi_theory + 1e-6;
        row.margin = row.rhs - row.lhs;
        row.pass = row.margin >= 0;
        rep.add_row(std::move(row));
        if (xi_theory > 0) envelope_ratio_max = std::max(envelope_ratio_max, xi_hat / xi_theory);
        if (best_lw > 0)
            weighted_ratio_max = std::max(weighted_ratio_max, lw_curve / best_lw - 1.0);
    }
    rep.fitted_constants.emplace_back("envelope_ratio_max", envelope_ratio_max);
    rep.fitted_constants.emplace_back("weighted_excess_max", weighted_ratio_max);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// C^1 modulus: smallest C >= 1 with osc(gamma'; eta) <= C omega(C eta) on
// dyadic eta; passes when C <= 100. Secant oscillations at eta, eta/2, eta/4
// must be monotone-consistent for the discrete surrogate to be trusted.
inline VerificationReport check_c1_modulus(const Polyline& geodesic, const Gauge& omega) {
    if (omega.kind == Gauge::Kind::log_inverse)
        throw NonDiniError("check_c1_modulus: omega must be a Dini mean slope");
    VerificationReport rep;
    rep.check_name = "c1_modulus";
    double L = geodesic.total_length();
    std::vector<double> scales, osc;
    for (int k = 3; k <= 8; ++k) {
        double eta = std::pow(2.0, -k);
        if (eta > L / 4) continue;
        scales.push_back(eta);
        osc.push_back(tangent_oscillation(geodesic, eta));
    }
    if (scales.size() < 2) throw std::invalid_argument("check_c1_modulus: curve too short");
    // scales descend by halving; a shrinking window must not see more
    // oscillation, or the secant surrogate is unresolved
    int inversions = 0;
    for (std::size_t k = 0; k + 1 < scales.size(); ++k)
        if (osc[k + 1] > 1.5 * osc[k] + 1e-9) ++inversions;
    auto omega_fn = [&](double r) {
        return gauge_eval(omega, std::min(r, omega.domain_upper));
    };
    auto holds = [&](double C) {
        for (std::size_t k = 0; k < scales.size(); ++k)
            if (osc[k] > C * omega_fn(C * scales[k]) + 1e-12) return false;
        return true;
    };
    double C = std::numeric_limits<double>::infinity();
    if (holds(1.0)) C = 1.0;
    else if (holds(100.0)) {
        double lo = 1.0, hi = 100.0;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (holds(mid)) hi = mid;
            else lo = mid;
        }
        C = hi;
    }
    bool pass = std::isfinite(C) && inversions == 0;
    for (std::size_t k = 0; k < scales.size(); ++k) {
        ReportRow row;
        row.instance = "eta" + std::to_string(k);
        row.r = scales[k];
        row.lhs = osc[k];
        row.rhs = std::isfinite(C) ? C * omega_fn(C * scales[k]) : omega_fn(scales[k]) * 100.0;
        row.margin = row.rhs - row.lhs;
        row.pass = pass;
        rep.add_row(std::move(row));
    }
    double max_osc = *std::max_element(osc.begin(), osc.end());
    rep.fitted_constants.emplace_back("C", std::isfinite(C) ? C : -1.0);
    rep.fitted_constants.emplace_back(
        "osc_exponent", max_osc > 0 ? fit_loglog_exponent(scales, osc) : 0.0);
    rep.fitted_constants.emplace_back("scale_inversions", inversions);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Local modulus regularity on a direction sweep: directions
// with positive tangent curvature get a quadratic lower bound (tail exponent
// at most 2.1); flat directions must show delta(v; eps)/eps^2 -> 0. The
// exponent is fitted on the three smallest dyadics, past the quartic-to-
// quadratic crossover of near-flat directions.
inline VerificationReport check_local_modulus_regularity(const NormSpec& norm, int sweep) {
    if (!norm.smooth() || !norm.rotund() || norm.dim != 2)
        throw std::domain_error("check_local_modulus_regularity: needs smooth rotund 2-D lp");
    VerificationReport rep;
    rep.check_name = "local_modulus_regularity";
    int complement = 0;
    double c_min = std::numeric_limits<double>::infinity();
    double c_sum = 0;
    int c_count = 0;
    for (int i = 0; i < sweep; ++i) {
        double theta = 2.0 * M_PI * i / sweep;
        Vec v = unit_circle_point(norm, theta);
        double d2 = tangent_second_derivative(norm, v);
        std::vector<double> eps, delta;
        for (int k = 1; k <= 8; ++k) {
            eps.push_back(std::pow(2.0, -k));
            delta.push_back(local_modulus(norm, v, eps.back()));
        }
        ReportRow row;
        row.instance = "v" + std::to_string(i);
        row.r = theta;
        if (d2 > kGMembershipThreshold) {
            double c = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < eps.size(); ++k)
                c = std::min(c, delta[k] / (eps[k] * eps[k]));
            std::vector<double> te(eps.end() - 3, eps.end());
            std::vector<double> td(delta.end() - 3, delta.end());
            double expo = fit_loglog_exponent(te, td);
            row.lhs = expo;
            row.rhs = 2.1;
            row.margin = std::min(2.1 - expo, c);
            row.pass = c > 1e-7 && expo <= 2.1;
            c_min = std::min(c_min, c);
            c_sum += c;
            ++c_count;
        } else {
            ++complement;
            double q_first = delta.front() / (eps.front() * eps.front());
            double q_last = delta.back() / (eps.back() * eps.back());
            row.lhs = q_last;
            row.rhs = 0.05 * q_first;
            row.margin = row.rhs - row.lhs;
            row.pass = q_last <= 0.05 * q_first;
            row.instance += ":flat";
        }
        rep.add_row(std::move(row));
    }
    rep.fitted_constants.emplace_back("complement_directions", complement);
    rep.fitted_constants.emplace_back("c_min", c_count ? c_min : 0.0);
    rep.fitted_constants.emplace_back("c_mean", c_count ? c_sum / c_count : 0.0);
    rep.finalize();
    return rep;
}

// ---------------------------------------------------------------------------
// Deterministic serialization: reports are byte-identical given identical
// inputs and seeds.
inline std::string report_csv(const VerificationReport& rep) {
    std::string out = "check,instance,r,lhs,rhs,margin,pass\n";
    char buf[256];
    for (const auto& row : rep.rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g,%.12g,%.12g,%d\n",
                      rep.check_name.c_str(), row.instance.c_str(), row.r, row.lhs, row.rhs,
                      row.margin, row.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

inline std::string report_summary_line(const VerificationReport& rep) {
    char buf[512];
    std::string consts;
    for (const auto& [k, v] : rep.fitted_constants) {
        char cb[96];
        std::snprintf(cb, sizeof cb, " %s=%.12g", k.c_str(), v);
        consts += cb;
    }
    std::snprintf(buf, sizeof buf, "%s: instances=%d violations=%d worst_margin=%.12g%s",
                  rep.check_name.c_str(), rep.instances, rep.violations, rep.worst_margin,
                  consts.c_str());
    return buf;
}

}  // namespace wsteiner
