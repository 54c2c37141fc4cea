#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsteiner/core.hpp"
#include "wsteiner/networks.hpp"
#include "wsteiner/norms.hpp"
#include "wsteiner/weights.hpp"

namespace wsteiner {

struct SolveParams {
    int initial_segments = 8;
    int refine_rounds = 3;
    double step_tolerance = 1e-7;
    int max_iters = 20000;
    std::uint64_t seed = 42;

    void validate() const {
        if (initial_segments < 1 || refine_rounds < 0 || !(step_tolerance > 0) || max_iters < 1)
            throw std::invalid_argument("SolveParams: invalid field");
    }
};

struct GridOracleParams {
    int resolution = 256;
    int neighborhood = 8;  // 8 or 16

    void validate() const {
        if (resolution < 32) throw std::invalid_argument("GridOracleParams: resolution >= 32");
        if (neighborhood != 8 && neighborhood != 16)
            throw std::invalid_argument("GridOracleParams: neighborhood must be 8 or 16");
    }
};

// int_edge w dH^1 by 8-node Gauss-Legendre; exact for affine w, tiny relative
// error for the smooth corpus weights at desk scale.
inline double weighted_edge_length(const WeightField& w, const NormSpec& norm, const Vec& a,
                                   const Vec& b) {
    double len = norm_dist(norm, a, b);
    if (len == 0) return 0;
    double s = 0;
    for (int k = 0; k < Gauss8::n; ++k)
        s += Gauss8::weight[k] * weight_eval_or_inf(w, lerp(a, b, Gauss8::node[k]));
    return len * s;
}

inline double weighted_length(const WeightField& w, const Network& net) {
    double s = 0;
    for (auto [i, j] : net.edges)
        s += weighted_edge_length(w, net.norm, net.vertices[i], net.vertices[j]);
    return s;
}

inline double weighted_length(const WeightField& w, const Polyline& pl) {
    double s = 0;
    for (std::size_t i = 1; i < pl.points.size(); ++i)
        s += weighted_edge_length(w, pl.norm, pl.points[i - 1], pl.points[i]);
    return s;
}

struct GeodesicResult {
    Polyline polyline;
    double objective = 0;
    int iterations = 0;
    std::vector<std::string> flags;
};

struct SteinerResult {
    Network network;
    double objective = 0;
    int iterations = 0;
    std::vector<std::string> flags;
    std::string topology;
};

namespace detail {

struct DescentProblem {
    std::vector<Vec> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<bool> free_vertex;
    const WeightField* w = nullptr;
    NormSpec norm;
    // search is confined to B(confine_center, confine_radius)
    Vec confine_center;
    double confine_radius = std::numeric_limits<double>::infinity();
};

inline double problem_objective(const DescentProblem& p) {
    double s = 0;
    for (auto [i, j] : p.edges)
        s += weighted_edge_length(*p.w, p.norm, p.vertices[i], p.vertices[j]);
    return s;
}

inline double local_objective(const DescentProblem& p, const std::vector<std::vector<int>>& adj,
                              int v, const Vec& pos) {
    double s = 0;
    for (int e : adj[v]) {
        auto [i, j] = p.edges[e];
        const Vec& other = (i == v) ? p.vertices[j] : p.vertices[i];
        s += weighted_edge_length(*p.w, p.norm, pos, other);
    }
    return s;
}

// Chain order of a path graph (all degrees <= 2, two endpoints); empty when
// the graph is not a path.
inline std::vector<int> chain_order(const DescentProblem& p) {
    std::vector<std::vector<int>> nbrs(p.vertices.size());
    for (auto [i, j] : p.edges) { nbrs[i].push_back(j); nbrs[j].push_back(i); }
    int start = -1, ends = 0;
    for (std::size_t v = 0; v < nbrs.size(); ++v) {
        if (nbrs[v].size() > 2) return {};
        if (nbrs[v].size() == 1) { ++ends; if (start < 0) start = static_cast<int>(v); }
    }
    if (ends != 2 || start < 0) return {};
    std::vector<int> order{start};
    int prev = -1, cur = start;
    while (true) {
        int nxt = -1;
        for (int nb : nbrs[cur])
            if (nb != prev) { nxt = nb; break; }
        if (nxt < 0) break;
        order.push_back(nxt);
        prev = cur;
        cur = nxt;
    }
    return order.size() == p.vertices.size() ? order : std::vector<int>{};
}

// Derivative-free per-vertex coordinate descent: axis probes plus random
// directions with backtracking and greedy expansion; only improving steps are
// accepted, so the objective is nonincreasing. Path problems additionally try
// global low-frequency bending modes each sweep, which would otherwise relax
// one vertex per sweep. Runs until a full sweep at the step tolerance yields
// no improvement.
inline int descend(DescentProblem& p, const SolveParams& params, Rng& rng,
                   std::vector<std::string>& flags, double step_hint = 0.0) {
    const int dim = p.norm.dim;
    std::vector<std::vector<int>> adj(p.vertices.size());
    for (std::size_t e = 0; e < p.edges.size(); ++e) {
        adj[p.edges[e].first].push_back(static_cast<int>(e));
        adj[p.edges[e].second].push_back(static_cast<int>(e));
    }
    double step = step_hint;
    if (!(step > 0)) {
        double extent = 0;
        for (const auto& v : p.vertices)
            for (const auto& u : p.vertices) extent = std::max(extent, norm_dist(p.norm, v, u));
        step = extent / 8.0;
    }
    step = std::max(step, params.step_tolerance);
    int iters = 0;
    bool domain_rejects = false;
    std::vector<Vec> dirs;
    for (int d = 0; d < dim; ++d) {
        Vec e(dim, 0.0);
        e[d] = 1.0; dirs.push_back(e);
        e[d] = -1.0; dirs.push_back(e);
    }
    const int random_dirs = 2;
    std::vector<int> chain = chain_order(p);

    auto suff = [&](double s_level, double base) {
        return std::max(1e-4 * s_level * s_level, 1e-15 * (1 + std::abs(base)));
    };
    auto confined = [&](const Vec& cand) {
        return !std::isfinite(p.confine_radius) ||
               norm_dist(p.norm, cand, p.confine_center) <= p.confine_radius;
    };

    // Hierarchical hat moves along the chain: bump spans of dyadic width so
    // low-frequency bending relaxes in O(1) sweeps instead of O(V^2).
    const int n_chain = static_cast<int>(chain.size());
    auto span_cost = [&](int lo, int hi) {  // chain edges lo-1 .. hi
        double s = 0;
        for (int k = std::max(0, lo - 1); k <= std::min(hi, n_chain - 2); ++k)
            s += weighted_edge_length(*p.w, p.norm, p.vertices[chain[k]],
                                      p.vertices[chain[k + 1]]);
        return s;
    };
    auto try_hats = [&](double s) {
        if (n_chain < 4) return false;
        bool any = false;
        for (int L = 2; L < n_chain; L *= 2) {
            for (int c = 1; c + 1 < n_chain; c += std::max(1, L / 2)) {
                int lo = std::max(1, c - L + 1), hi = std::min(n_chain - 2, c + L - 1);
                if (hi < lo) continue;
                double base = span_cost(lo, hi);
                if (!std::isfinite(base)) continue;
                double tiny = suff(s, base);
                for (int d = 0; d < dim; ++d) {
                    for (double sign : {1.0, -1.0}) {
                        double amp = s;
                        while (amp < 1e6) {
                            bool feasible = true;
                            for (int idx = lo; idx <= hi; ++idx) {
                                int v = chain[idx];
                                if (!p.free_vertex[v]) continue;
                                double wgt = 1.0 - std::abs(idx - c) / static_cast<double>(L);
                                p.vertices[v][d] += sign * amp * wgt;
                                if (!confined(p.vertices[v])) feasible = false;
                            }
                            double val = feasible ? span_cost(lo, hi)
                                                  : std::numeric_limits<double>::infinity();
                            if (std::isfinite(val) && val < base - tiny) {
                                base = val;
                                any = true;
                                amp *= 2;
                            } else {
                                for (int idx = lo; idx <= hi; ++idx) {
                                    int v = chain[idx];
                                    if (!p.free_vertex[v]) continue;
                                    double wgt = 1.0 - std::abs(idx - c) / static_cast<double>(L);
                                    p.vertices[v][d] -= sign * amp * wgt;
                                }
                                break;
                            }
                        }
                    }
                }
            }
        }
        return any;
    };

    int level_sweeps = 0;
    while (iters < params.max_iters) {
        ++iters;
        ++level_sweeps;
        bool improved = false;
        for (std::size_t v = 0; v < p.vertices.size(); ++v) {
            if (!p.free_vertex[v]) continue;
            double base = local_objective(p, adj, static_cast<int>(v), p.vertices[v]);
            if (!std::isfinite(base)) { domain_rejects = true; continue; }
            std::vector<Vec> probe = dirs;
            for (int k = 0; k < random_dirs; ++k) {
                Vec d(dim);
                double n2 = 0;
                for (int i = 0; i < dim; ++i) { d[i] = rng.uniform(-1, 1); n2 += d[i] * d[i]; }
                if (n2 > 1e-12) probe.push_back(scale(d, 1.0 / std::sqrt(n2)));
            }
            for (const auto& d : probe) {
                double s = step;
                for (int bt = 0; bt < 3 && s >= params.step_tolerance * 0.5; ++bt, s *= 0.5) {
                    Vec cand = add(p.vertices[v], scale(d, s));
                    if (!confined(cand)) continue;
                    double val = local_objective(p, adj, static_cast<int>(v), cand);
                    if (!std::isfinite(val)) { domain_rejects = true; continue; }
                    if (val < base - suff(s, base)) {
                        improved = true;
                        // bracket by doubling, then settle at the 1-D optimum
                        // so quantized moves do not leave sawtooth residue
                        Vec origin = p.vertices[v];
                        double hi = s;
                        double best_t = s, best_val = val;
                        while (hi < 1e6) {
                            Vec more = add(origin, scale(d, 2 * hi));
                            if (!confined(more)) break;
                            double mv = local_objective(p, adj, static_cast<int>(v), more);
                            if (!std::isfinite(mv) || mv >= best_val) break;
                            hi *= 2;
                            best_t = hi;
                            best_val = mv;
                        }
                        auto g = [&](double t) {
                            Vec z = add(origin, scale(d, t));
                            if (!confined(z)) return std::numeric_limits<double>::infinity();
                            return local_objective(p, adj, static_cast<int>(v), z);
                        };
                        double t = golden_min(g, 0.0, 2 * hi,
                                              std::max(params.step_tolerance / 8, hi / 256));
                        double gv = g(t);
                        if (gv < best_val) { best_t = t; best_val = gv; }
                        p.vertices[v] = add(origin, scale(d, best_t));
                        base = best_val;
                        break;
                    }
                }
            }
        }
        if (try_hats(step)) improved = true;
        // intermediate levels get a sweep budget; leftovers relax at finer
        // scales. The final level must stall cleanly so the stationarity
        // claim at step_tolerance is honest.
        bool final_level = step <= params.step_tolerance * (1 + 1e-12);
        if (!improved || (!final_level && level_sweeps >= 200)) {
            if (final_level && !improved) break;
            step = std::max(step / 2.0, params.step_tolerance);
            level_sweeps = 0;
        }
    }
    if (iters >= params.max_iters) flags.push_back("max_iters");
    if (domain_rejects) flags.push_back("domain_step_rejected");
    return iters;
}

// Insert edge midpoints: every edge splits in two, new vertices are free.
inline void refine_midpoints(DescentProblem& p) {
    std::vector<std::pair<int, int>> new_edges;
    new_edges.reserve(p.edges.size() * 2);
    for (auto [i, j] : p.edges) {
        Vec mid = lerp(p.vertices[i], p.vertices[j], 0.5);
        int m = static_cast<int>(p.vertices.size());
        p.vertices.push_back(std::move(mid));
        p.free_vertex.push_back(true);
        new_edges.emplace_back(i, m);
        new_edges.emplace_back(m, j);
    }
    p.edges = std::move(new_edges);
}

}  // namespace detail

// Two-terminal geodesic by polyline descent with midpoint refinement. The
// search is confined to B(x0, R), R = (1 + initial objective) / a_lo, the
// a-priori radius of any minimizing sequence.
inline GeodesicResult geodesic_solve(const Vec& x0, const Vec& x1, const WeightField& w,
                                     const NormSpec& norm, const SolveParams& params) {
    params.validate();
    if (norm_dist(norm, x0, x1) == 0)
        throw std::invalid_argument("geodesic_solve: endpoints must differ");
    if (!(w.bound_lo > 0))
        throw std::invalid_argument("geodesic_solve: weight must be bounded below");
    detail::DescentProblem p;
    p.norm = norm;
    p.w = &w;
    for (int k = 0; k <= params.initial_segments; ++k)
        p.vertices.push_back(lerp(x0, x1, double(k) / params.initial_segments));
    for (int k = 0; k < params.initial_segments; ++k) p.edges.emplace_back(k, k + 1);
    p.free_vertex.assign(p.vertices.size(), true);
    p.free_vertex.front() = p.free_vertex.back() = false;

    GeodesicResult res;
    double beta = detail::problem_objective(p);
    if (!std::isfinite(beta)) {
        // straight initialization exits the domain; nudge is not attempted,
        // the caller picked endpoints whose chord lies inside (convex domains)
        res.flags.push_back("initial_outside_domain");
        beta = 1.0;
    }
    p.confine_center = x0;
    p.confine_radius = (1.0 + beta) / w.bound_lo;

    Rng rng(params.seed);
    int iters = detail::descend(p, params, rng, res.flags);
    for (int round = 0; round < params.refine_rounds; ++round) {
        detail::refine_midpoints(p);
        // resume at the new segment scale: the shape is already converged
        double seg = norm_dist(norm, x0, x1) / static_cast<double>(p.edges.size());
        iters += detail::descend(p, params, rng, res.flags, seg);
    }
    res.iterations = iters;
    res.polyline.norm = norm;
    // midpoint insertion appends vertices; rebuild path order by walking
    // the edges from endpoint 0
    {
        std::vector<std::vector<int>> adj(p.vertices.size());
        for (auto [i, j] : p.edges) { adj[i].push_back(j); adj[j].push_back(i); }
        std::vector<Vec> ordered;
        int prev = -1, cur = 0;
        ordered.push_back(p.vertices[0]);
        while (true) {
            int nxt = -1;
            for (int nb : adj[cur])
                if (nb != prev) { nxt = nb; break; }
            if (nxt < 0) break;
            ordered.push_back(p.vertices[nxt]);
            prev = cur;
            cur = nxt;
        }
        res.polyline.points = std::move(ordered);
    }
    res.objective = weighted_length(w, res.polyline);
    res.polyline.validate();
    return res;
}

namespace detail {

struct Topology {
    std::string name;
    std::vector<Vec> vertices;             // terminals first, then free points
    std::vector<std::pair<int, int>> edges;
    std::vector<bool> free_vertex;
};

inline Vec centroid(const std::vector<Vec>& pts, std::initializer_list<int> ids) {
    Vec c(pts[0].size(), 0.0);
    for (int i : ids) c = add(c, pts[i]);
    return scale(c, 1.0 / static_cast<double>(ids.size()));
}

inline std::vector<Topology> steiner_topologies(const std::vector<Vec>& t) {
    std::vector<Topology> tops;
    int n = static_cast<int>(t.size());
    auto terminals_only = [&](const std::string& name) {
        Topology top;
        top.name = name;
        top.vertices = t;
        top.free_vertex.assign(t.size(), false);
        return top;
    };
    if (n == 3) {
        Topology spider = terminals_only("spider3");
        spider.vertices.push_back(centroid(t, {0, 1, 2}));
        spider.free_vertex.push_back(true);
        spider.edges = {{0, 3}, {1, 3}, {2, 3}};
        tops.push_back(std::move(spider));
        for (int mid = 0; mid < 3; ++mid) {
            Topology path = terminals_only("path3-via-" + std::to_string(mid));
            int a = (mid + 1) % 3, b = (mid + 2) % 3;
            path.edges = {{a, mid}, {mid, b}};
            tops.push_back(std::move(path));
        }
    } else if (n == 4) {
        const int pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (const auto& pr : pairings) {
            Topology tree = terminals_only("steiner4-" + std::to_string(pr[1]) +
                                           std::to_string(pr[3]));
            tree.vertices.push_back(centroid(t, {pr[0], pr[1]}));
            tree.vertices.push_back(centroid(t, {pr[2], pr[3]}));
            tree.free_vertex.push_back(true);
            tree.free_vertex.push_back(true);
            tree.edges = {{pr[0], 4}, {pr[1], 4}, {pr[2], 5}, {pr[3], 5}, {4, 5}};
            tops.push_back(std::move(tree));
        }
        Topology star = terminals_only("star4-free-hub");
        star.vertices.push_back(centroid(t, {0, 1, 2, 3}));
        star.free_vertex.push_back(true);
        star.edges = {{0, 4}, {1, 4}, {2, 4}, {3, 4}};
        tops.push_back(std::move(star));
        for (int hub = 0; hub < 4; ++hub) {
            Topology s = terminals_only("star4-hub-" + std::to_string(hub));
            for (int k = 0; k < 4; ++k)
                if (k != hub) s.edges.emplace_back(k, hub);
            tops.push_back(std::move(s));
        }
        int perm[4] = {0, 1, 2, 3};
        std::sort(perm, perm + 4);
        do {
            if (perm[0] > perm[3]) continue;  // drop reversals
            Topology path = terminals_only("path4-" + std::to_string(perm[0]) +
                                           std::to_string(perm[1]) + std::to_string(perm[2]) +
                                           std::to_string(perm[3]));
            path.edges = {{perm[0], perm[1]}, {perm[1], perm[2]}, {perm[2], perm[3]}};
            tops.push_back(std::move(path));
        } while (std::next_permutation(perm, perm + 4));
    } else {
        throw std::invalid_argument("steiner_solve: supports 3 or 4 terminals");
    }
    return tops;
}

inline bool lex_less(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    std::vector<double> fa, fb;
    for (const auto& v : a) fa.insert(fa.end(), v.begin(), v.end());
    for (const auto& v : b) fb.insert(fb.end(), v.begin(), v.end());
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    return std::lexicographical_compare(fa.begin(), fa.end(), fb.begin(), fb.end());
}

}  // namespace detail

// Small Steiner networks: enumerate candidate topologies, run joint descent
// on the free vertices of each, return the best. Steiner points that land
// within 1e-7 of a terminal are merged (topology collapse).
inline SteinerResult steiner_solve(const std::vector<Vec>& terminals, const WeightField& w,
                                   const NormSpec& norm, const SolveParams& params) {
    params.validate();
    for (std::size_t i = 0; i < terminals.size(); ++i)
        for (std::size_t j = i + 1; j < terminals.size(); ++j)
            if (norm_dist(norm, terminals[i], terminals[j]) == 0)
                throw std::invalid_argument("steiner_solve: terminals must be distinct");

    SteinerResult best;
    best.objective = std::numeric_limits<double>::infinity();
    int iters_total = 0;
    for (auto& top : detail::steiner_topologies(terminals)) {
        detail::DescentProblem p;
        p.norm = norm;
        p.w = &w;
        p.vertices = top.vertices;
        p.edges = top.edges;
        p.free_vertex = top.free_vertex;
        // subdivide legs so nonconstant weights bend them
        int rounds = 0;
        while ((1 << rounds) < params.initial_segments) ++rounds;
        for (int k = 0; k < rounds; ++k) detail::refine_midpoints(p);
        double beta = detail::problem_objective(p);
        p.confine_center = terminals[0];
        p.confine_radius = std::isfinite(beta)
                               ? (1.0 + beta) / w.bound_lo
                               : std::numeric_limits<double>::infinity();
        Rng rng(params.seed ^ fnv1a(top.name));
        std::vector<std::string> flags;
        int iters = detail::descend(p, params, rng, flags);
        for (int round = 0; round < params.refine_rounds; ++round) {
            detail::refine_midpoints(p);
            double seg = 0;
            for (auto [i, j] : p.edges)
                seg = std::max(seg, norm_dist(norm, p.vertices[i], p.vertices[j]));
            iters += detail::descend(p, params, rng, flags, seg);
        }
        iters_total += iters;
        double obj = detail::problem_objective(p);
        if (!std::isfinite(obj)) continue;

        // merge near-terminal Steiner points and deduplicate
        Network net;
        net.norm = norm;
        std::vector<int> remap(p.vertices.size(), -1);
        auto find_or_add = [&](const Vec& v) {
            for (std::size_t k = 0; k < net.vertices.size(); ++k)
                if (norm_dist(norm, net.vertices[k], v) < 1e-7) return static_cast<int>(k);
            net.vertices.push_back(v);
            return static_cast<int>(net.vertices.size() - 1);
        };
        for (std::size_t k = 0; k < terminals.size(); ++k) {
            net.vertices.push_back(terminals[k]);
            net.terminals.push_back(static_cast<int>(k));
            remap[k] = static_cast<int>(k);
        }
        for (std::size_t k = terminals.size(); k < p.vertices.size(); ++k)
            remap[k] = find_or_add(p.vertices[k]);
        for (auto [i, j] : p.edges) {
            int a = remap[i], b = remap[j];
            if (a == b) continue;
            bool dup = false;
            for (auto [u, v] : net.edges)
                if (std::minmax(u, v) == std::minmax(a, b)) { dup = true; break; }
            if (!dup) net.edges.emplace_back(a, b);
        }
        double net_obj = weighted_length(w, net);
        bool better = net_obj < best.objective - 1e-9;
        bool tie = std::abs(net_obj - best.objective) <= 1e-9;
        if (better || (tie && detail::lex_less(net.vertices, best.network.vertices))) {
            best.network = std::move(net);
            best.objective = net_obj;
            best.topology = top.name;
            best.flags = std::move(flags);
        }
    }
    best.iterations = iters_total;
    validate_network(best.network);
    return best;
}

struct GridOracleResult {
    double value = 0;
    // worst-case lattice-direction overestimate factor for the stencil
    double metrication_factor = 1.0;
    double cell = 0;
};

// Independent verification oracle: Dijkstra on a lattice graph over the
// domain's bounding box; edge cost is the trapezoid rule of w along the edge
// times its norm length. Overestimates the continuous distance, with the
// bias bounded by the stencil's angular gap.
inline GridOracleResult grid_oracle(const Vec& x0, const Vec& x1, const WeightField& w,
                                    const Domain& domain, const NormSpec& norm,
                                    const GridOracleParams& params) {
    params.validate();
    if (norm.dim != 2) throw std::invalid_argument("grid_oracle: 2-D domains only");
    Vec lo, hi;
    domain.bounding_box(lo, hi);
    const int N = params.resolution;
    auto pos = [&](int i, int j) {
        return Vec{lo[0] + (hi[0] - lo[0]) * i / (N - 1.0),
                   lo[1] + (hi[1] - lo[1]) * j / (N - 1.0)};
    };
    auto snap = [&](const Vec& x) {
        int i = static_cast<int>(std::round((x[0] - lo[0]) / (hi[0] - lo[0]) * (N - 1)));
        int j = static_cast<int>(std::round((x[1] - lo[1]) / (hi[1] - lo[1]) * (N - 1)));
        if (i < 0 || j < 0 || i >= N || j >= N)
            throw std::invalid_argument("grid_oracle: endpoint outside grid");
        return std::make_pair(i, j);
    };
    if (!domain_contains(domain, x0) || !domain_contains(domain, x1))
        throw std::invalid_argument("grid_oracle: endpoints must lie inside the domain");

    std::vector<double> wnode(static_cast<std::size_t>(N) * N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
            wnode[static_cast<std::size_t>(j) * N + i] = weight_eval_or_inf(w, pos(i, j));

    std::vector<std::pair<int, int>> moves = {{1, 0}, {-1, 0}, {0, 1}, {0, -1},
                                              {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    if (params.neighborhood == 16) {
        std::vector<std::pair<int, int>> knights = {{1, 2},  {2, 1},  {-1, 2},  {-2, 1},
                                                    {1, -2}, {2, -1}, {-1, -2}, {-2, -1}};
        moves.insert(moves.end(), knights.begin(), knights.end());
    }
    std::vector<double> move_len(moves.size());
    double cellx = (hi[0] - lo[0]) / (N - 1.0);
    double celly = (hi[1] - lo[1]) / (N - 1.0);
    for (std::size_t m = 0; m < moves.size(); ++m)
        move_len[m] = norm_eval(norm, Vec{moves[m].first * cellx, moves[m].second * celly});

    auto [si, sj] = snap(x0);
    auto [ti, tj] = snap(x1);
    auto idx = [N](int i, int j) { return static_cast<std::size_t>(j) * N + i; };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(N) * N, inf);
    using QE = std::pair<double, std::size_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[idx(si, sj)] = 0;
    pq.emplace(0.0, idx(si, sj));
    std::size_t target = idx(ti, tj);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (u == target) break;
        int ui = static_cast<int>(u % N), uj = static_cast<int>(u / N);
        for (std::size_t m = 0; m < moves.size(); ++m) {
            int vi = ui + moves[m].first, vj = uj + moves[m].second;
            if (vi < 0 || vj < 0 || vi >= N || vj >= N) continue;
            std::size_t v = idx(vi, vj);
            if (!std::isfinite(wnode[u]) || !std::isfinite(wnode[v])) continue;
            double nd = d + move_len[m] * 0.5 * (wnode[u] + wnode[v]);
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    if (!std::isfinite(dist[target]))
        throw std::runtime_error("grid_oracle: target unreachable on the lattice");
    GridOracleResult out;
    out.value = dist[target];
    // maximal angular gap: 45 deg for the 8-stencil, atan(1/2) wide for 16
    out.metrication_factor =
        params.neighborhood == 8 ? 1.0 / std::cos(M_PI / 8) : 1.0 / std::cos(std::atan2(1.0, 2.0) / 2);
    out.cell = std::max(cellx, celly);
    return out;
}

}  // namespace wsteiner
