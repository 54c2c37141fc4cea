#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/gauges.hpp"
#include "wsteiner/norms.hpp"

namespace wsteiner {

struct Ball {
    Vec center;
    double radius = 1.0;
    NormSpec norm;
};

struct Polyline {
    std::vector<Vec> points;
    NormSpec norm;

    void validate() const {
        if (points.size() < 2) throw std::invalid_argument("Polyline: need >= 2 points");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (norm_dist(norm, points[i], points[i - 1]) == 0)
                throw std::invalid_argument("Polyline: consecutive points must be distinct");
    }

    std::vector<double> cumulative_lengths() const {
        std::vector<double> c(points.size(), 0.0);
        for (std::size_t i = 1; i < points.size(); ++i)
            c[i] = c[i - 1] + norm_dist(norm, points[i], points[i - 1]);
        return c;
    }

    double total_length() const { return cumulative_lengths().back(); }

    // Point at arclength s (clamped to [0, L]).
    Vec at_arclength(double s) const {
        auto c = cumulative_lengths();
        s = std::clamp(s, 0.0, c.back());
        auto it = std::upper_bound(c.begin(), c.end(), s);
        std::size_t k = std::min(points.size() - 1,
                                 static_cast<std::size_t>(it - c.begin()));
        if (k == 0) return points.front();
        double seg = c[k] - c[k - 1];
        double t = seg > 0 ? (s - c[k - 1]) / seg : 0.0;
        return lerp(points[k - 1], points[k], t);
    }
};

struct Network {
    std::vector<Vec> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> terminals;
    NormSpec norm;
};

inline Network as_network(const Polyline& pl) {
    Network net;
    net.norm = pl.norm;
    net.vertices = pl.points;
    for (std::size_t i = 1; i < pl.points.size(); ++i)
        net.edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(i));
    net.terminals = {0, static_cast<int>(pl.points.size() - 1)};
    return net;
}

namespace detail {

inline double point_segment_param(const NormSpec& norm, const Vec& z, const Vec& a,
                                  const Vec& b) {
    auto f = [&](double t) { return norm_eval(norm, sub(z, lerp(a, b, t))); };
    return golden_min(f, 0.0, 1.0, 1e-12);
}

inline double point_segment_dist(const NormSpec& norm, const Vec& z, const Vec& a,
                                 const Vec& b) {
    double t = point_segment_param(norm, z, a, b);
    double d = norm_eval(norm, sub(z, lerp(a, b, t)));
    return std::min({d, norm_dist(norm, z, a), norm_dist(norm, z, b)});
}

// Distance to the full line through a with direction b-a (convex 1-D problem;
// the bracket expands until the minimum is interior).
inline double point_line_dist(const NormSpec& norm, const Vec& z, const Vec& a,
                              const Vec& b) {
    auto f = [&](double t) { return norm_eval(norm, sub(z, lerp(a, b, t))); };
    double lo = -1.0, hi = 2.0;
    while (f(lo) <= f(lo + 0.25) && lo > -1e6) lo *= 2;
    while (f(hi) <= f(hi - 0.25) && hi < 1e6) hi *= 2;
    double t = golden_min(f, lo, hi, 1e-12);
    return f(t);
}

// Colinear overlap of positive length between two segments (in any dimension),
// used to reject networks whose H^1 length would double-count.
inline bool segments_overlap(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    Vec u = sub(b, a);
    double lu = euclid(u);
    if (lu == 0) return false;
    auto off_line = [&](const Vec& z) {
        Vec w = sub(z, a);
        double t = dot(w, u) / (lu * lu);
        return euclid(sub(w, scale(u, t)));
    };
    double tol = 1e-12 * std::max(1.0, lu);
    if (off_line(c) > tol || off_line(d) > tol) return false;
    double tc = dot(sub(c, a), u) / (lu * lu);
    double td = dot(sub(d, a), u) / (lu * lu);
    double lo = std::max(0.0, std::min(tc, td));
    double hi = std::min(1.0, std::max(tc, td));
    return (hi - lo) * lu > 1e-10;
}

}  // namespace detail

inline void validate_network(const Network& net) {
    const auto n = static_cast<int>(net.vertices.size());
    if (n == 0) throw std::invalid_argument("Network: empty");
    for (const auto& v : net.vertices)
        if (static_cast<int>(v.size()) != net.norm.dim)
            throw std::invalid_argument("Network: vertex dimension mismatch");
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : net.edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw std::invalid_argument("Network: edge index out of range");
        if (i == j || norm_dist(net.norm, net.vertices[i], net.vertices[j]) == 0)
            throw std::invalid_argument("Network: zero-length edge");
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second)
            throw std::invalid_argument("Network: duplicate edge");
    }
    for (int t : net.terminals)
        if (t < 0 || t >= n) throw std::invalid_argument("Network: terminal index out of range");
    // connectivity
    std::vector<int> comp(n, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [i, j] : net.edges) {
            int o = (i == v) ? j : (j == v ? i : -1);
            if (o >= 0 && comp[o] < 0) { comp[o] = 0; stack.push_back(o); }
        }
    }
    for (int v = 0; v < n; ++v)
        if (comp[v] < 0) throw std::invalid_argument("Network: not connected");
    for (std::size_t e1 = 0; e1 < net.edges.size(); ++e1)
        for (std::size_t e2 = e1 + 1; e2 < net.edges.size(); ++e2)
            if (detail::segments_overlap(net.vertices[net.edges[e1].first],
                                         net.vertices[net.edges[e1].second],
                                         net.vertices[net.edges[e2].first],
                                         net.vertices[net.edges[e2].second]))
                throw std::invalid_argument("Network: edges overlap along a positive-length set");
}

inline double length(const Network& net) {
    double s = 0;
    for (auto [i, j] : net.edges) s += norm_dist(net.norm, net.vertices[i], net.vertices[j]);
    return s;
}

inline double network_diameter(const Network& net) {
    double d = 0;
    for (std::size_t i = 0; i < net.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < net.vertices.size(); ++j)
            d = std::max(d, norm_dist(net.norm, net.vertices[i], net.vertices[j]));
    return d;
}

namespace detail {

// Sublevel interval {t in [0,1] : ||lerp(a,b,t) - x|| <= r} of the convex
// distance-along-edge function; nullopt when the edge misses the ball.
inline std::optional<std::pair<double, double>> edge_ball_interval(
    const NormSpec& norm, const Vec& a, const Vec& b, const Vec& x, double r) {
    auto f = [&](double t) { return norm_eval(norm, sub(lerp(a, b, t), x)); };
    double f0 = f(0), f1 = f(1);
    double tmin = golden_min(f, 0.0, 1.0, 1e-13);
    double ft = f(tmin);
    double fmin = std::min({ft, f0, f1});
    if (fmin > r) return std::nullopt;
    double t1 = 0.0, t2 = 1.0;
    if (f0 > r)
        t1 = ft < r ? bisect_root([&](double t) { return f(t) - r; }, 0.0, tmin, 1e-13) : tmin;
    if (f1 > r)
        t2 = ft < r ? bisect_root([&](double t) { return r - f(t); }, tmin, 1.0, 1e-13) : tmin;
    if (t2 < t1) std::swap(t1, t2);
    return std::make_pair(t1, t2);
}

}  // namespace detail

// Points of the network on the sphere bd B(x, r). Per edge the distance to
// the center is convex in the parameter, so the level set has at most two
// roots; trace points closer than 1e-9 are merged (shared vertices).
inline std::vector<Vec> ball_trace(const Network& net, const Ball& ball) {
    std::vector<Vec> pts;
    auto push_unique = [&](const Vec& z) {
        for (const auto& w : pts)
            if (norm_dist(net.norm, z, w) < 1e-9) return;
        pts.push_back(z);
    };
    for (auto [i, j] : net.edges) {
        const Vec& a = net.vertices[i];
        const Vec& b = net.vertices[j];
        auto f = [&](double t) { return norm_eval(net.norm, sub(lerp(a, b, t), ball.center)); };
        double f0 = f(0), f1 = f(1);
        double tmin = golden_min(f, 0.0, 1.0, 1e-13);
        double ft = f(tmin);
        double fmin = std::min({ft, f0, f1});
        double r = ball.radius;
        if (fmin > r + 1e-15) continue;
        if (f0 >= r) {
            double t = (f0 <= r) ? 0.0
                       : (ft < r) ? bisect_root([&](double u) { return f(u) - r; }, 0.0, tmin, 1e-12)
                                  : tmin;  // tangency
            push_unique(lerp(a, b, t));
        }
        if (f1 >= r) {
            double t = (f1 <= r) ? 1.0
                       : (ft < r) ? bisect_root([&](double u) { return r - f(u); }, tmin, 1.0, 1e-12)
                                  : tmin;
            push_unique(lerp(a, b, t));
        }
    }
    return pts;
}

// H^1 measure of the network inside the closed ball, exact per edge.
inline double length_in_ball(const Network& net, const Ball& ball) {
    double s = 0;
    for (auto [i, j] : net.edges) {
        const Vec& a = net.vertices[i];
        const Vec& b = net.vertices[j];
        auto iv = detail::edge_ball_interval(net.norm, a, b, ball.center, ball.radius);
        if (iv) s += (iv->second - iv->first) * norm_dist(net.norm, a, b);
    }
    return s;
}

inline bool point_on_network(const Network& net, const Vec& x, double tol = 1e-9) {
    for (auto [i, j] : net.edges)
        if (detail::point_segment_dist(net.norm, x, net.vertices[i], net.vertices[j]) <= tol)
            return true;
    return false;
}

// theta(x, r) = H^1(C cap B(x,r)) / 2r, optionally weighted by exp[zeta(r)]
// where zeta is a mean-slope gauge.
inline double density_ratio(const Network& net, const Vec& x, double r,
                            const Gauge* zeta = nullptr) {
    if (!(r > 0)) throw std::invalid_argument("density_ratio: r must be > 0");
    if (!point_on_network(net, x))
        throw std::invalid_argument("density_ratio: x is not on the network");
    double ratio = length_in_ball(net, Ball{x, r, net.norm}) / (2.0 * r);
    if (zeta) ratio *= std::exp(gauge_eval(*zeta, r));
    return ratio;
}

namespace detail {

inline std::vector<std::pair<Vec, Vec>> as_segments(const Network& net) {
    std::vector<std::pair<Vec, Vec>> segs;
    for (auto [i, j] : net.edges) segs.emplace_back(net.vertices[i], net.vertices[j]);
    return segs;
}

inline double directed_hausdorff(const NormSpec& norm,
                                 const std::vector<std::pair<Vec, Vec>>& from,
                                 const std::vector<std::pair<Vec, Vec>>& to,
                                 double step) {
    auto dist_to = [&](const Vec& z) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : to) {
            double da = norm_dist(norm, z, a), db = norm_dist(norm, z, b);
            double lb = std::min(da, db) - norm_dist(norm, a, b);
            if (lb >= d) continue;
            d = std::min({d, da, db});
            if (d > 0) d = std::min(d, point_segment_dist(norm, z, a, b));
        }
        return d;
    };
    double h = 0;
    for (const auto& [a, b] : from) {
        double len = norm_dist(norm, a, b);
        int n = std::max(1, static_cast<int>(std::ceil(len / step)));
        for (int k = 0; k <= n; ++k) h = std::max(h, dist_to(lerp(a, b, double(k) / n)));
    }
    return h;
}

}  // namespace detail

// Hausdorff distance by dense arclength sampling (step <= 1e-3 x total
// length) with exact point-to-segment distances.
inline double hausdorff_distance(const Network& a, const Network& b) {
    if (!(a.norm == b.norm))
        throw std::invalid_argument("hausdorff_distance: norm/dimension mismatch");
    auto sa = detail::as_segments(a);
    auto sb = detail::as_segments(b);
    double total = length(a) + length(b);
    double step = std::max(1e-3 * total, 1e-12);
    return std::max(detail::directed_hausdorff(a.norm, sa, sb, step),
                    detail::directed_hausdorff(a.norm, sb, sa, step));
}

inline double hausdorff_distance(const Polyline& a, const Polyline& b) {
    return hausdorff_distance(as_network(a), as_network(b));
}

// Spider competitor surgery: remove the open ball and
// join each trace point to the hub. Coincides with the input outside the ball.
inline Network spider_competitor(const Network& net, const Ball& ball, const Vec& hub) {
    if (norm_dist(net.norm, hub, ball.center) > ball.radius * (1 + 1e-12))
        throw std::invalid_argument("spider_competitor: hub must lie in the closed ball");
    Network out;
    out.norm = net.norm;
    auto add_vertex = [&](const Vec& v) {
        for (std::size_t i = 0; i < out.vertices.size(); ++i)
            if (norm_dist(net.norm, out.vertices[i], v) < 1e-9) return static_cast<int>(i);
        out.vertices.push_back(v);
        return static_cast<int>(out.vertices.size() - 1);
    };
    auto add_edge = [&](int i, int j) {
        if (i == j) return;
        auto key = std::minmax(i, j);
        for (auto [a, b] : out.edges)
            if (std::minmax(a, b) == key) return;
        out.edges.emplace_back(i, j);
    };
    std::vector<Vec> trace = ball_trace(net, ball);
    for (auto [i, j] : net.edges) {
        const Vec& a = net.vertices[i];
        const Vec& b = net.vertices[j];
        auto iv = detail::edge_ball_interval(net.norm, a, b, ball.center, ball.radius);
        if (!iv) {
            add_edge(add_vertex(a), add_vertex(b));
            continue;
        }
        auto [t1, t2] = *iv;
        if (t1 > 1e-12) add_edge(add_vertex(a), add_vertex(lerp(a, b, t1)));
        if (t2 < 1.0 - 1e-12) add_edge(add_vertex(lerp(a, b, t2)), add_vertex(b));
    }
    int hub_idx = add_vertex(hub);
    for (const auto& z : trace) add_edge(hub_idx, add_vertex(z));
    for (int t : net.terminals) {
        const Vec& v = net.vertices[t];
        for (std::size_t i = 0; i < out.vertices.size(); ++i)
            if (norm_dist(net.norm, out.vertices[i], v) < 1e-9) {
                out.terminals.push_back(static_cast<int>(i));
                break;
            }
    }
    if (out.vertices.empty()) throw std::invalid_argument("spider_competitor: degenerate input");
    return out;
}

// Max oscillation of the unit secant direction over parameter pairs at most
// eta apart. The secant over a centered window of width eta stands in for the
// tangent; C^1 checks compare it across three window scales.
inline double tangent_oscillation(const Polyline& curve, double eta) {
    if (!(eta > 0)) throw std::invalid_argument("tangent_oscillation: eta must be > 0");
    curve.validate();
    auto cum = curve.cumulative_lengths();
    double L = cum.back();
    if (eta > L) throw std::invalid_argument("tangent_oscillation: eta exceeds curve length");
    double lo = eta / 2, hi = L - eta / 2;
    if (hi <= lo) return 0.0;
    std::vector<double> samples;
    double step = std::min(eta / 16.0, (hi - lo) / 64.0);
    if (step <= 0) step = eta / 16.0;
    for (double s = lo; s <= hi; s += step) samples.push_back(s);
    samples.push_back(hi);
    for (double c : cum) {  // hit corner-aligned windows exactly
        for (double s : {c - eta / 2, c, c + eta / 2})
            if (s >= lo && s <= hi) samples.push_back(s);
    }
    std::sort(samples.begin(), samples.end());
    std::vector<Vec> dirs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Vec d = sub(curve.at_arclength(samples[i] + eta / 2),
                    curve.at_arclength(samples[i] - eta / 2));
        double n = norm_eval(curve.norm, d);
        dirs[i] = n > 0 ? scale(d, 1.0 / n) : d;
    }
    double osc = 0;
    std::size_t j0 = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        while (samples[i] - samples[j0] > eta) ++j0;
        for (std::size_t j = j0; j < i; ++j)
            osc = std::max(osc, norm_eval(curve.norm, sub(dirs[i], dirs[j])));
    }
    return osc;
}

}  // namespace wsteiner
