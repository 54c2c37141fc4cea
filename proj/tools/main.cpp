#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wsteiner/io.hpp"
#include "wsteiner/quasihyp.hpp"
#include "wsteiner/suite.hpp"

namespace ws = wsteiner;
using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::string text = ws::read_file(path);
    return json::parse(text);  // parse_error carries the byte offset
}

ws::Vec parse_point(const std::string& s) {
    ws::Vec v;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        v.push_back(std::stod(s.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (v.size() < 2) throw std::invalid_argument("expected a comma-separated point like 0.5,1");
    return v;
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) std::fputs(text.c_str(), stdout);
    else ws::write_file(out_path, text);
}

int run_solve_geodesic(const std::string& instance_path, const std::string& out_path,
                       const std::string& svg_path) {
    ws::ProblemInstance inst = ws::instance_from_json(load_json_file(instance_path));
    if (inst.terminals.size() != 2)
        throw std::invalid_argument("solve geodesic: instance needs exactly 2 terminals");
    auto res = ws::geodesic_solve(inst.terminals[0], inst.terminals[1], inst.weight, inst.norm,
                                  inst.params);
    json j;
    j["polyline"] = ws::to_json(res.polyline);
    j["objective"] = res.objective;
    j["iterations"] = res.iterations;
    j["flags"] = res.flags;
    emit(j, out_path);
    if (!svg_path.empty()) ws::write_file(svg_path, ws::svg_export(ws::as_network(res.polyline)));
    return 0;
}

int run_solve_steiner(const std::string& instance_path, const std::string& out_path,
                      const std::string& svg_path) {
    ws::ProblemInstance inst = ws::instance_from_json(load_json_file(instance_path));
    auto res = ws::steiner_solve(inst.terminals, inst.weight, inst.norm, inst.params);
    json j;
    j["network"] = ws::to_json(res.network);
    j["objective"] = res.objective;
    j["iterations"] = res.iterations;
    j["topology"] = res.topology;
    j["flags"] = res.flags;
    emit(j, out_path);
    if (!svg_path.empty()) ws::write_file(svg_path, ws::svg_export(res.network));
    return 0;
}

int run_quasihyp(const std::string& domain_path, const std::string& from_s,
                 const std::string& to_s, const std::string& out_path,
                 const std::string& svg_path, int segments, int refine, std::uint64_t seed) {
    ws::Domain dom = ws::domain_from_json(load_json_file(domain_path));
    ws::SolveParams params;
    params.initial_segments = segments;
    params.refine_rounds = refine;
    params.seed = seed;
    auto res = ws::quasihyp_distance(dom, parse_point(from_s), parse_point(to_s), params);
    json j;
    j["distance"] = res.distance;
    j["length_bound"] = res.length_bound;
    j["eta"] = res.eta;
    j["geodesic"] = ws::to_json(res.geodesic);
    j["iterations"] = res.iterations;
    j["flags"] = res.flags;
    emit(j, out_path);
    if (!svg_path.empty()) ws::write_file(svg_path, ws::svg_export(ws::as_network(res.geodesic)));
    return 0;
}

int run_oracle_grid(const std::string& instance_path, int resolution, int neighborhood) {
    json ij = load_json_file(instance_path);
    ws::ProblemInstance inst = ws::instance_from_json(ij);
    if (inst.terminals.size() != 2)
        throw std::invalid_argument("oracle grid: instance needs exactly 2 terminals");
    if (!inst.domain) throw std::invalid_argument("oracle grid: instance needs a domain");
    ws::GridOracleParams gp;
    gp.resolution = resolution;
    gp.neighborhood = neighborhood;
    auto res = ws::grid_oracle(inst.terminals[0], inst.terminals[1], inst.weight, *inst.domain,
                               inst.norm, gp);
    json j;
    j["value"] = res.value;
    j["metrication_factor"] = res.metrication_factor;
    j["cell"] = res.cell;
    emit(j, "");
    return 0;
}

int run_modulus(const std::string& norm_path, const std::string& out_path, bool local,
                int sweep, int grid_points) {
    ws::NormSpec spec = ws::norm_from_json(load_json_file(norm_path));
    if (local) {
        std::string csv = "theta,tangent_second_derivative,in_g\n";
        char buf[96];
        for (int i = 0; i < sweep; ++i) {
            double theta = 2.0 * M_PI * i / sweep;
            ws::Vec v = ws::unit_circle_point(spec, theta);
            double d2 = ws::tangent_second_derivative(spec, v);
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d\n", theta, d2,
                          d2 > ws::kGMembershipThreshold ? 1 : 0);
            csv += buf;
        }
        if (out_path.empty()) std::fputs(csv.c_str(), stdout);
        else ws::write_file(out_path, csv);
        return 0;
    }
    ws::ModulusCurve curve = ws::build_modulus_curve(spec, ws::linear_eps_grid(grid_points));
    std::string csv = ws::curve_csv(curve);
    if (out_path.empty()) std::fputs(csv.c_str(), stdout);
    else ws::write_file(out_path, csv);
    return 0;
}

int run_gauge(const std::string& spec_path, double eval_r, double slope_r, bool dini) {
    ws::Gauge g = ws::gauge_from_json(load_json_file(spec_path));
    char buf[64];
    if (eval_r > 0) {
        std::snprintf(buf, sizeof buf, "%.12g\n", ws::gauge_eval(g, eval_r));
        std::fputs(buf, stdout);
    }
    if (slope_r > 0) {
        std::snprintf(buf, sizeof buf, "%.12g\n", ws::mean_slope(g, slope_r));
        std::fputs(buf, stdout);
    }
    if (dini) {
        auto res = ws::dini_test(g, 2.0, 40);
        json j;
        j["is_dini"] = res.is_dini;
        j["partial_sum"] = res.partial_sum;
        if (res.tail_bound) j["tail_bound"] = *res.tail_bound;
        emit(j, "");
    }
    return 0;
}

int run_verify_all(const std::string& suite_path, const std::string& report_dir,
                   std::uint64_t seed, int jobs) {
    auto all = ws::default_suite();
    std::vector<ws::SuiteTask> tasks;
    if (!suite_path.empty()) {
        json sj = load_json_file(suite_path);
        if (sj.contains("seed")) seed = sj.at("seed").get<std::uint64_t>();
        if (sj.contains("tasks")) {
            for (const auto& name : sj.at("tasks")) {
                bool found = false;
                for (const auto& t : all)
                    if (t.name == name.get<std::string>()) { tasks.push_back(t); found = true; }
                if (!found)
                    throw std::invalid_argument("verify: unknown task '" +
                                                name.get<std::string>() + "'");
            }
        } else {
            tasks = all;
        }
    } else {
        tasks = all;
    }

    std::vector<ws::VerificationReport> reports(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
            reports[i] = tasks[i].run(seed);
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    bool all_ok = true;
    json summary = json::array();
    std::string summary_csv = "task,check,instances,violations,worst_margin,expected_flagged,ok\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        bool ok = ws::task_outcome_ok(tasks[i], reports[i]);
        all_ok = all_ok && ok;
        json entry = ws::report_to_json(reports[i]);
        entry["task"] = tasks[i].name;
        entry["expected_flagged"] = tasks[i].expect_flagged;
        entry["ok"] = ok;
        if (!report_dir.empty()) {
            // relative paths keep reports byte-identical across report roots
            std::string details = tasks[i].name + ".csv";
            ws::write_file(report_dir + "/" + details, ws::report_csv(reports[i]));
            entry["details_path"] = details;
        }
        summary.push_back(entry);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.12g,%d,%d\n", tasks[i].name.c_str(),
                      reports[i].check_name.c_str(), reports[i].instances, reports[i].violations,
                      reports[i].worst_margin, tasks[i].expect_flagged ? 1 : 0, ok ? 1 : 0);
        summary_csv += buf;
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL",
                    ws::report_summary_line(reports[i]).c_str());
    }
    if (!report_dir.empty()) {
        ws::write_file(report_dir + "/summary.json", summary.dump(2) + "\n");
        ws::write_file(report_dir + "/summary.csv", summary_csv);
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted Steiner networks, geodesics and regularity checks in lp spaces"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "minimize weighted length");
    solve->require_subcommand(1);
    std::string instance_path, out_path, svg_path;
    auto* geo = solve->add_subcommand("geodesic", "two-terminal geodesic");
    geo->add_option("--instance", instance_path, "problem instance JSON")->required();
    geo->add_option("--out", out_path, "result JSON path (stdout if omitted)");
    geo->add_option("--svg", svg_path, "SVG export path");
    auto* st = solve->add_subcommand("steiner", "3- or 4-terminal Steiner network");
    st->add_option("--instance", instance_path, "problem instance JSON")->required();
    st->add_option("--out", out_path, "result JSON path (stdout if omitted)");
    st->add_option("--svg", svg_path, "SVG export path");

    // quasihyp
    std::string domain_path, from_s, to_s;
    int qh_segments = 16, qh_refine = 5;
    std::uint64_t seed = 42;
    auto* qh = app.add_subcommand("quasihyp", "quasihyperbolic distance and geodesic");
    qh->add_option("--domain", domain_path, "domain JSON")->required();
    qh->add_option("--from", from_s, "start point x,y")->required();
    qh->add_option("--to", to_s, "end point x,y")->required();
    qh->add_option("--out", out_path, "result JSON path (stdout if omitted)");
    qh->add_option("--svg", svg_path, "SVG export path");
    qh->add_option("--segments", qh_segments, "initial polyline segments");
    qh->add_option("--refine", qh_refine, "midpoint refinement rounds");
    qh->add_option("--seed", seed, "random seed");

    // oracle grid
    int resolution = 256, neighborhood = 8;
    auto* oracle = app.add_subcommand("oracle", "independent verification oracles");
    oracle->require_subcommand(1);
    auto* grid = oracle->add_subcommand("grid", "lattice shortest-path oracle");
    grid->add_option("--instance", instance_path, "problem instance JSON")->required();
    grid->add_option("--resolution", resolution, "lattice nodes per axis");
    grid->add_option("--neighborhood", neighborhood, "stencil: 8 or 16");

    // modulus
    std::string norm_path;
    bool local_sweep = false;
    int sweep = 720, grid_points = 64;
    auto* mod = app.add_subcommand("modulus", "modulus of uniform rotundity");
    mod->add_option("--norm", norm_path, "norm JSON")->required();
    mod->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    mod->add_flag("--local", local_sweep, "sweep the local tangent curvature instead");
    mod->add_option("--sweep", sweep, "directions for --local");
    mod->add_option("--grid", grid_points, "eps grid points for the curve");

    // gauge
    std::string gauge_path;
    double eval_r = 0, slope_r = 0;
    bool dini = false;
    auto* gg = app.add_subcommand("gauge", "evaluate gauges and mean slopes");
    gg->add_option("--spec", gauge_path, "gauge JSON")->required();
    gg->add_option("--eval", eval_r, "evaluate xi(r)");
    gg->add_option("--mean-slope", slope_r, "evaluate zeta(r)");
    gg->add_flag("--dini", dini, "run the dyadic Dini test");

    // verify all
    std::string suite_path, report_dir;
    int jobs = 1;
    auto* verify = app.add_subcommand("verify", "run the verification harness");
    verify->require_subcommand(1);
    auto* vall = verify->add_subcommand("all", "run every configured check");
    vall->add_option("--suite", suite_path, "suite JSON (defaults to the built-in corpus)");
    vall->add_option("--report", report_dir, "directory for CSV/JSON reports");
    vall->add_option("--seed", seed, "root seed for all substreams");
    vall->add_option("--jobs", jobs, "parallel task workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (geo->parsed()) return run_solve_geodesic(instance_path, out_path, svg_path);
        if (st->parsed()) return run_solve_steiner(instance_path, out_path, svg_path);
        if (qh->parsed())
            return run_quasihyp(domain_path, from_s, to_s, out_path, svg_path, qh_segments,
                                qh_refine, seed);
        if (grid->parsed()) return run_oracle_grid(instance_path, resolution, neighborhood);
        if (mod->parsed()) return run_modulus(norm_path, out_path, local_sweep, sweep, grid_points);
        if (gg->parsed()) return run_gauge(gauge_path, eval_r, slope_r, dini);
        if (vall->parsed()) {
            if (!report_dir.empty()) std::filesystem::create_directories(report_dir);
            return run_verify_all(suite_path, report_dir, seed, jobs);
        }
    } catch (const json::parse_error& e) {
        std::fprintf(stderr, "input error: malformed JSON: %s\n", e.what());
        return 2;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
