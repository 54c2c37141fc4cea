#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wsteiner/gauges.hpp"
#include "wsteiner/modulus.hpp"
#include "wsteiner/networks.hpp"
#include "wsteiner/norms.hpp"
#include "wsteiner/solver.hpp"
#include "wsteiner/verify.hpp"
#include "wsteiner/weights.hpp"

namespace wsteiner {

using nlohmann::json;

// ----------------------------------------------------------------- NormSpec
inline json to_json(const NormSpec& s) {
    json j;
    j["dim"] = s.dim;
    switch (s.family) {
        case NormFamily::lp: j["family"] = "lp"; j["p"] = s.p; break;
        case NormFamily::linf: j["family"] = "linf"; break;
        case NormFamily::euclidean: j["family"] = "euclidean"; break;
    }
    return j;
}

inline NormSpec norm_from_json(const json& j) {
    std::string fam = j.at("family").get<std::string>();
    int dim = j.at("dim").get<int>();
    if (fam == "lp") return NormSpec::Lp(j.at("p").get<double>(), dim);
    if (fam == "linf") return NormSpec::Linf(dim);
    if (fam == "euclidean") return NormSpec::Euclidean(dim);
    throw std::invalid_argument("norm: unknown family '" + fam + "'");
}

// ----------------------------------------------------------------- Networks
inline json to_json(const Polyline& p) {
    json j;
    j["points"] = p.points;
    j["norm"] = to_json(p.norm);
    return j;
}

inline Polyline polyline_from_json(const json& j) {
    Polyline p;
    p.points = j.at("points").get<std::vector<Vec>>();
    p.norm = norm_from_json(j.at("norm"));
    p.validate();
    return p;
}

inline json to_json(const Network& n) {
    json j;
    j["vertices"] = n.vertices;
    j["edges"] = json::array();
    for (auto [a, b] : n.edges) j["edges"].push_back({a, b});
    j["terminals"] = n.terminals;
    j["norm"] = to_json(n.norm);
    return j;
}

inline Network network_from_json(const json& j) {
    Network n;
    n.vertices = j.at("vertices").get<std::vector<Vec>>();
    for (const auto& e : j.at("edges"))
        n.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    if (j.contains("terminals")) n.terminals = j.at("terminals").get<std::vector<int>>();
    n.norm = norm_from_json(j.at("norm"));
    validate_network(n);
    return n;
}

// ------------------------------------------------------------------- Domain
inline json to_json(const Domain& d) {
    json j;
    j["norm"] = to_json(d.norm);
    switch (d.kind) {
        case Domain::Kind::box:
            j["kind"] = "box"; j["lo"] = d.lo; j["hi"] = d.hi; break;
        case Domain::Kind::ball:
            j["kind"] = "ball"; j["center"] = d.center; j["radius"] = d.radius; break;
        case Domain::Kind::half_plane_window:
            j["kind"] = "half_plane_window"; j["height"] = d.height; j["width"] = d.width; break;
    }
    return j;
}

inline Domain domain_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    NormSpec norm = norm_from_json(j.at("norm"));
    if (kind == "box")
        return Domain::box(j.at("lo").get<Vec>(), j.at("hi").get<Vec>(), norm);
    if (kind == "ball")
        return Domain::ball(j.at("center").get<Vec>(), j.at("radius").get<double>(), norm);
    if (kind == "half_plane_window")
        return Domain::half_plane_window(j.at("height").get<double>(), j.at("width").get<double>(),
                                         norm);
    throw std::invalid_argument("domain: unknown kind '" + kind + "'");
}

// -------------------------------------------------------------- WeightField
inline json to_json(const WeightField& w) {
    json j;
    j["norm"] = to_json(w.norm);
    j["bounds"] = {w.bound_lo, w.bound_hi};
    switch (w.kind) {
        case WeightField::Kind::constant:
            j["kind"] = "constant"; j["c"] = w.c; break;
        case WeightField::Kind::affine:
            j["kind"] = "affine"; j["gradient"] = w.gradient; j["offset"] = w.c;
            j["clamp_min"] = w.clamp_min; break;
        case WeightField::Kind::holder:
            j["kind"] = "holder"; j["c"] = w.c; j["a"] = w.a; j["alpha"] = w.alpha;
            j["anchor"] = w.anchor; break;
        case WeightField::Kind::inverse_boundary_distance:
            j["kind"] = "inverse_boundary_distance"; j["domain"] = to_json(w.domain); break;
    }
    return j;
}

inline WeightField weight_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    NormSpec norm = j.contains("norm") ? norm_from_json(j.at("norm")) : NormSpec::Euclidean(2);
    WeightField w;
    if (kind == "constant") {
        w = WeightField::constant(j.at("c").get<double>(), norm);
    } else if (kind == "affine") {
        double hi = j.contains("bounds") ? j.at("bounds").at(1).get<double>()
                                         : std::numeric_limits<double>::infinity();
        w = WeightField::affine(j.at("gradient").get<Vec>(), j.at("offset").get<double>(),
                                j.at("clamp_min").get<double>(), norm, hi);
    } else if (kind == "holder") {
        w = WeightField::holder(j.at("c").get<double>(), j.at("a").get<double>(),
                                j.at("alpha").get<double>(), j.at("anchor").get<Vec>(), norm);
        if (j.contains("bounds")) w.bound_hi = j.at("bounds").at(1).get<double>();
    } else if (kind == "inverse_boundary_distance") {
        w = WeightField::inverse_boundary_distance(domain_from_json(j.at("domain")));
    } else {
        throw std::invalid_argument("weight: unknown kind '" + kind + "'");
    }
    if (j.contains("bounds")) {
        w.bound_lo = j.at("bounds").at(0).get<double>();
        w.bound_hi = j.at("bounds").at(1).get<double>();
    }
    return w;
}

// -------------------------------------------------------------------- Gauge
inline json to_json(const Gauge& g) {
    json j;
    j["domain_upper"] = g.domain_upper;
    switch (g.kind) {
        case Gauge::Kind::geometric:
            j["variant"] = "geometric"; j["a"] = g.a; j["alpha"] = g.alpha; break;
        case Gauge::Kind::log_geometric:
            j["variant"] = "log_geometric"; j["a"] = g.a; j["alpha"] = g.alpha; break;
        case Gauge::Kind::log_inverse:
            j["variant"] = "log_inverse"; break;
        case Gauge::Kind::tabulated:
            j["variant"] = "tabulated"; j["r_grid"] = g.r_grid; j["xi_values"] = g.xi_values;
            break;
        case Gauge::Kind::composed:
            throw std::invalid_argument("gauge: composed gauges have no JSON form");
    }
    return j;
}

inline Gauge gauge_from_json(const json& j) {
    std::string variant = j.at("variant").get<std::string>();
    if (variant == "geometric")
        return Gauge::geometric(j.at("a").get<double>(), j.at("alpha").get<double>(),
                                j.value("domain_upper", 1.0));
    if (variant == "log_geometric")
        return Gauge::log_geometric(j.at("a").get<double>(), j.at("alpha").get<double>(),
                                    j.value("domain_upper", 0.5));
    if (variant == "log_inverse") return Gauge::log_inverse(j.value("domain_upper", 0.5));
    if (variant == "tabulated")
        return Gauge::tabulated(j.at("r_grid").get<std::vector<double>>(),
                                j.at("xi_values").get<std::vector<double>>());
    throw std::invalid_argument("gauge: unknown variant '" + variant + "'");
}

// ------------------------------------------------------------------ Solver
inline json to_json(const SolveParams& p) {
    return json{{"initial_segments", p.initial_segments},
                {"refine_rounds", p.refine_rounds},
                {"step_tolerance", p.step_tolerance},
                {"max_iters", p.max_iters},
                {"seed", p.seed}};
}

inline SolveParams solve_params_from_json(const json& j) {
    SolveParams p;
    p.initial_segments = j.value("initial_segments", p.initial_segments);
    p.refine_rounds = j.value("refine_rounds", p.refine_rounds);
    p.step_tolerance = j.value("step_tolerance", p.step_tolerance);
    p.max_iters = j.value("max_iters", p.max_iters);
    p.seed = j.value("seed", p.seed);
    p.validate();
    return p;
}

struct ProblemInstance {
    std::vector<Vec> terminals;
    WeightField weight;
    std::optional<Domain> domain;
    NormSpec norm;
    SolveParams params;
};

inline ProblemInstance instance_from_json(const json& j) {
    ProblemInstance inst;
    inst.terminals = j.at("terminals").get<std::vector<Vec>>();
    inst.norm = norm_from_json(j.at("norm"));
    if (j.contains("domain")) inst.domain = domain_from_json(j.at("domain"));
    if (j.contains("weight")) {
        json wj = j.at("weight");
        if (!wj.contains("norm")) wj["norm"] = to_json(inst.norm);
        inst.weight = weight_from_json(wj);
    } else {
        inst.weight = WeightField::constant(1.0, inst.norm);
    }
    inst.params = j.contains("params") ? solve_params_from_json(j.at("params")) : SolveParams{};
    return inst;
}

// --------------------------------------------------------------------- CSV
inline std::string curve_csv(const ModulusCurve& c) {
    std::string out = "eps,delta\n";
    char buf[80];
    for (std::size_t i = 0; i < c.eps_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", c.eps_grid[i], c.delta_values[i]);
        out += buf;
    }
    return out;
}

// --------------------------------------------------------------------- SVG
// Fixed 1000x1000 viewBox, one path per edge, 2-decimal coordinates.
inline std::string svg_export(const Network& net) {
    if (net.norm.dim != 2) throw std::invalid_argument("svg_export: 2-D networks only");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& v : net.vertices) {
        xmin = std::min(xmin, v[0]); xmax = std::max(xmax, v[0]);
        ymin = std::min(ymin, v[1]); ymax = std::max(ymax, v[1]);
    }
    double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    double margin = 50.0, scale = 900.0 / span;
    auto tx = [&](double x) { return margin + (x - xmin) * scale; };
    auto ty = [&](double y) { return 1000.0 - margin - (y - ymin) * scale; };
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\">\n";
    char buf[160];
    for (auto [i, j] : net.edges) {
        std::snprintf(buf, sizeof buf,
                      "  <path d=\"M %.2f %.2f L %.2f %.2f\" stroke=\"black\" "
                      "stroke-width=\"2\" fill=\"none\"/>\n",
                      tx(net.vertices[i][0]), ty(net.vertices[i][1]),
                      tx(net.vertices[j][0]), ty(net.vertices[j][1]));
        out += buf;
    }
    for (int t : net.terminals) {
        std::snprintf(buf, sizeof buf,
                      "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"5\" fill=\"red\"/>\n",
                      tx(net.vertices[t][0]), ty(net.vertices[t][1]));
        out += buf;
    }
    out += "</svg>\n";
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline json report_to_json(const VerificationReport& rep) {
    json j;
    j["check"] = rep.check_name;
    j["instances"] = rep.instances;
    j["violations"] = rep.violations;
    j["worst_margin"] = rep.worst_margin;
    json fc = json::object();
    for (const auto& [k, v] : rep.fitted_constants) fc[k] = v;
    j["fitted_constants"] = fc;
    if (!rep.details_path.empty()) j["details_path"] = rep.details_path;
    return j;
}

}  // namespace wsteiner
