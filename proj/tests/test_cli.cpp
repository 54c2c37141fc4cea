#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wsteiner/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string tmp = (fs::temp_directory_path() / "wsteiner_cli_out.txt").string();
    std::string cmd = std::string(WSTEINER_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream f(tmp);
    std::ostringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

fs::path write_temp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream f(p);
    f << content;
    return p;
}

}  // namespace

TEST_CASE("gauge subcommand evaluates the closed-form mean slope") {
    auto spec = write_temp("gauge_geo.json",
                           R"({"variant":"geometric","a":1.0,"alpha":0.5,"domain_upper":1.0})");
    auto res = run_cli("gauge --spec " + spec.string() + " --mean-slope 0.25");
    CHECK(res.exit_code == 0);
    CHECK(std::stod(res.out) == doctest::Approx(1.0));

    auto li = write_temp("gauge_li.json", R"({"variant":"log_inverse","domain_upper":0.5})");
    auto dini = run_cli("gauge --spec " + li.string() + " --dini");
    CHECK(dini.exit_code == 0);
    CHECK(json::parse(dini.out).at("is_dini").get<bool>() == false);
}

TEST_CASE("modulus subcommand writes the curve CSV") {
    auto norm = write_temp("norm_eu.json", R"({"family":"euclidean","dim":2})");
    fs::path out = fs::temp_directory_path() / "curve.csv";
    auto res = run_cli("modulus --norm " + norm.string() + " --out " + out.string() +
                       " --grid 16");
    REQUIRE(res.exit_code == 0);
    std::ifstream f(out);
    std::string header, line;
    std::getline(f, header);
    CHECK(header == "eps,delta");
    // find the eps = 1.0 row (grid i=7 of 16: eps = 2*8/16)
    double delta_at_1 = -1;
    while (std::getline(f, line)) {
        auto comma = line.find(',');
        if (std::stod(line.substr(0, comma)) == doctest::Approx(1.0))
            delta_at_1 = std::stod(line.substr(comma + 1));
    }
    CHECK(delta_at_1 == doctest::Approx(1.0 - std::sqrt(3.0) / 2).epsilon(1e-5));
}

TEST_CASE("solve geodesic emits result JSON and SVG") {
    json inst;
    inst["terminals"] = {{0.0, 0.0}, {1.0, 0.0}};
    inst["norm"] = {{"family", "lp"}, {"p", 3.0}, {"dim", 2}};
    inst["params"] = {{"initial_segments", 8}, {"refine_rounds", 1}};
    auto path = write_temp("geo_instance.json", inst.dump());
    fs::path out = fs::temp_directory_path() / "geo_out.json";
    fs::path svg = fs::temp_directory_path() / "geo_out.svg";
    auto res = run_cli("solve geodesic --instance " + path.string() + " --out " + out.string() +
                       " --svg " + svg.string());
    REQUIRE(res.exit_code == 0);
    json result = json::parse(wsteiner::read_file(out.string()));
    CHECK(result.at("objective").get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(result.contains("polyline"));
    // SVG renders one path per edge
    std::string svg_text = wsteiner::read_file(svg.string());
    int paths = 0;
    for (std::size_t pos = 0; (pos = svg_text.find("<path", pos)) != std::string::npos; ++pos)
        ++paths;
    int edges = static_cast<int>(result.at("polyline").at("points").size()) - 1;
    CHECK(paths == edges);
    CHECK(svg_text.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
}

TEST_CASE("solve steiner reports the topology") {
    json inst;
    inst["terminals"] = {{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.866025403784}};
    inst["norm"] = {{"family", "euclidean"}, {"dim", 2}};
    inst["params"] = {{"initial_segments", 1}, {"refine_rounds", 0},
                      {"step_tolerance", 1e-9}};
    auto path = write_temp("steiner_instance.json", inst.dump());
    auto res = run_cli("solve steiner --instance " + path.string());
    REQUIRE(res.exit_code == 0);
    json result = json::parse(res.out);
    CHECK(result.at("objective").get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-4));
}

TEST_CASE("quasihyp subcommand") {
    json dom;
    dom["kind"] = "half_plane_window";
    dom["height"] = 16.0;
    dom["width"] = 100.0;
    dom["norm"] = {{"family", "euclidean"}, {"dim", 2}};
    auto path = write_temp("hpw.json", dom.dump());
    auto res = run_cli("quasihyp --domain " + path.string() +
                       " --from 0,1 --to 0,2.718281828459045 --segments 8 --refine 3");
    REQUIRE(res.exit_code == 0);
    json result = json::parse(res.out);
    CHECK(result.at("distance").get<double>() == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(result.at("eta").get<double>() > 0.9);
}

TEST_CASE("oracle grid subcommand") {
    json inst;
    inst["terminals"] = {{0.25, 0.5}, {0.75, 0.5}};
    inst["norm"] = {{"family", "euclidean"}, {"dim", 2}};
    inst["domain"] = {{"kind", "box"}, {"lo", {0.0, 0.0}}, {"hi", {1.0, 1.0}},
                      {"norm", {{"family", "euclidean"}, {"dim", 2}}}};
    auto path = write_temp("grid_instance.json", inst.dump());
    auto res = run_cli("oracle grid --instance " + path.string() + " --resolution 65");
    REQUIRE(res.exit_code == 0);
    json result = json::parse(res.out);
    CHECK(result.at("value").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("malformed JSON exits 2 with a diagnostic") {
    auto path = write_temp("broken.json", "{\"family\": \"lp\", ");
    auto res = run_cli("modulus --norm " + path.string());
    CHECK(res.exit_code == 2);
    CHECK(res.out.find("input error") != std::string::npos);
}

TEST_CASE("unknown suite task exits 2") {
    auto path = write_temp("bad_suite.json", R"({"tasks":["no_such_check"]})");
    auto res = run_cli("verify all --suite " + path.string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("JSON round trips preserve geometry") {
    wsteiner::Network tri;
    tri.norm = wsteiner::NormSpec::Lp(3.0, 2);
    tri.vertices = {{0.0, 0.0}, {1.0, 0.25}, {0.5, 1.0}};
    tri.edges = {{0, 1}, {1, 2}};
    tri.terminals = {0, 2};
    auto back = wsteiner::network_from_json(wsteiner::to_json(tri));
    REQUIRE(back.vertices.size() == tri.vertices.size());
    for (std::size_t i = 0; i < tri.vertices.size(); ++i)
        CHECK(back.vertices[i] == tri.vertices[i]);
    CHECK(back.edges == tri.edges);
    CHECK(back.terminals == tri.terminals);
    CHECK(back.norm == tri.norm);

    wsteiner::Domain hpw = wsteiner::domain_from_json(wsteiner::to_json(
        wsteiner::Domain::half_plane_window(10.0, 100.0, wsteiner::NormSpec::Euclidean(2))));
    CHECK(wsteiner::boundary_distance(hpw, {0.0, 0.5}) == doctest::Approx(0.5));
}

TEST_CASE("gauge JSON round trip") {
    using wsteiner::Gauge;
    Gauge tab = Gauge::tabulated({0.1, 0.2, 0.4}, {0.0, 0.1, 0.3});
    Gauge back = wsteiner::gauge_from_json(wsteiner::to_json(tab));
    for (double r : {0.05, 0.15, 0.3, 0.4})
        CHECK(wsteiner::gauge_eval(back, r) == wsteiner::gauge_eval(tab, r));
    Gauge lg = wsteiner::gauge_from_json(wsteiner::to_json(Gauge::log_geometric(1.2, 0.7)));
    CHECK(wsteiner::mean_slope(lg, 0.25) ==
          doctest::Approx(1.2 / 0.7 * std::pow(std::abs(std::log(0.25)), -0.7)));
}

TEST_CASE("verify all --jobs 2 matches the sequential output") {
    auto suite = write_temp("jobs_suite.json",
                            R"({"seed":42,"tasks":["excess_length_euclidean",)"
                            R"("density_dichotomy_segment","monotonicity_tripod"]})");
    auto seq = run_cli("verify all --suite " + suite.string() + " --jobs 1");
    auto par = run_cli("verify all --suite " + suite.string() + " --jobs 2");
    CHECK(seq.exit_code == 0);
    CHECK(par.exit_code == 0);
    CHECK(seq.out == par.out);
}

TEST_CASE("verify all on a small suite passes and is byte-identical across runs") {
    auto suite = write_temp("small_suite.json",
                            R"({"seed":42,"tasks":["excess_length_euclidean",)"
                            R"("density_dichotomy_segment","almost_minimality_planted"]})");
    fs::path dir1 = fs::temp_directory_path() / "ws_rep1";
    fs::path dir2 = fs::temp_directory_path() / "ws_rep2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    auto r1 = run_cli("verify all --suite " + suite.string() + " --report " + dir1.string());
    auto r2 = run_cli("verify all --suite " + suite.string() + " --report " + dir2.string());
    CHECK(r1.exit_code == 0);  // planted task is expected-flagged, so the suite passes
    CHECK(r2.exit_code == 0);
    CHECK(r1.out == r2.out);
    for (const auto& entry : fs::directory_iterator(dir1)) {
        std::string name = entry.path().filename().string();
        CHECK(wsteiner::read_file(entry.path().string()) ==
              wsteiner::read_file((dir2 / name).string()));
    }
}
