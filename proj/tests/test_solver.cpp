#include <doctest.h>

#include "wsteiner/quasihyp.hpp"
#include "wsteiner/solver.hpp"

using namespace wsteiner;

namespace {

SolveParams quick_params(int segments = 8, int rounds = 2, double tol = 1e-5) {
    SolveParams p;
    p.initial_segments = segments;
    p.refine_rounds = rounds;
    p.step_tolerance = tol;
    p.seed = 42;
    return p;
}

// brute-force oracle for the 3-terminal Steiner point: grid search over the
// hub position followed by local refinement
double fermat_oracle(const std::vector<Vec>& t, const NormSpec& norm) {
    auto total = [&](double x, double y) {
        double s = 0;
        for (const auto& v : t) s += norm_eval(norm, Vec{v[0] - x, v[1] - y});
        return s;
    };
    double best = 1e300, bx = 0, by = 0;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 200; ++j) {
            double x = -0.2 + 1.4 * i / 200.0, y = -0.2 + 1.4 * j / 200.0;
            double v = total(x, y);
            if (v < best) { best = v; bx = x; by = y; }
        }
    double step = 0.01;
    while (step > 1e-10) {
        bool moved = false;
        for (auto [dx, dy] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
            double v = total(bx + dx, by + dy);
            if (v < best) { best = v; bx += dx; by += dy; moved = true; }
        }
        if (!moved) step /= 2;
    }
    return best;
}

}  // namespace

TEST_CASE("weighted length quadrature is exact for affine weights") {
    NormSpec eu = NormSpec::Euclidean(2);
    WeightField aff = WeightField::affine({2.0, 0.0}, 3.0, 1e-9, eu, 100.0);
    // int_0^1 (3 + 2x) dx = 4, times length 1
    CHECK(weighted_edge_length(aff, eu, {0.0, 0.0}, {1.0, 0.0}) == doctest::Approx(4.0));
}

TEST_CASE("unit weight in a rotund norm: the segment is the geodesic") {
    NormSpec p3 = NormSpec::Lp(3.0, 2);
    WeightField one = WeightField::constant(1.0, p3);
    auto res = geodesic_solve({0.0, 0.0}, {1.0, 0.0}, one, p3, quick_params(8, 2, 1e-7));
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-6));
    Polyline segment;
    segment.norm = p3;
    segment.points = {{0.0, 0.0}, {1.0, 0.0}};
    CHECK(hausdorff_distance(res.polyline, segment) <= 1e-4);
}

TEST_CASE("hyperbolic vertical pair: distance 1") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    WeightField w = WeightField::inverse_boundary_distance(hpw);
    auto res = geodesic_solve({0.0, 1.0}, {0.0, std::exp(1.0)}, w, eu, quick_params(8, 3));
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("hyperbolic horizontal pair: arccosh(3)") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    WeightField w = WeightField::inverse_boundary_distance(hpw);
    auto res = geodesic_solve({-1.0, 1.0}, {1.0, 1.0}, w, eu, quick_params(16, 3));
    CHECK(res.objective == doctest::Approx(std::acosh(3.0)).epsilon(0.01));
}

TEST_CASE("objective decreases under refinement within 0.5%") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    WeightField w = WeightField::inverse_boundary_distance(hpw);
    auto coarse = geodesic_solve({-1.0, 1.0}, {1.0, 1.0}, w, eu, quick_params(16, 2));
    auto fine = geodesic_solve({-1.0, 1.0}, {1.0, 1.0}, w, eu, quick_params(32, 2));
    CHECK(std::abs(coarse.objective - fine.objective) <= 0.005 * fine.objective);
}

TEST_CASE("grid oracle") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain box = Domain::box({0.0, 0.0}, {1.0, 1.0}, eu);
    WeightField one = WeightField::constant(1.0, eu);
    GridOracleParams gp;
    gp.resolution = 65;

    SUBCASE("axis-aligned pair is exact") {
        // endpoints on lattice nodes sharing a row
        auto res = grid_oracle({0.25, 0.5}, {0.75, 0.5}, one, box, eu, gp);
        CHECK(res.value == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("8-neighborhood metrication factor bounds the bias") {
        Rng rng(9);
        for (int k = 0; k < 10; ++k) {
            Vec a{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
            Vec b{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
            if (norm_dist(eu, a, b) < 0.2) continue;
            auto res = grid_oracle(a, b, one, box, eu, gp);
            double truth = norm_dist(eu, a, b);
            CHECK(res.value >= truth - 2.1 * res.cell);  // snapping slack
            CHECK(res.value <= res.metrication_factor * truth + 2.1 * res.cell);
        }
    }
    SUBCASE("hyperbolic vertical pair at resolution 512") {
        Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
        Domain lattice = Domain::box({-0.7, 0.5}, {0.7, 3.2}, eu);
        WeightField w = WeightField::inverse_boundary_distance(hpw);
        GridOracleParams fine;
        fine.resolution = 512;
        fine.neighborhood = 16;
        auto tight = grid_oracle({0.0, 1.0}, {0.0, std::exp(1.0)}, w, lattice, eu, fine);
        CHECK(tight.value == doctest::Approx(1.0).epsilon(2e-3));
    }
    SUBCASE("solver stays below the oracle plus its bias") {
        Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
        Domain lattice = Domain::box({-1.6, 0.4}, {1.6, 2.4}, eu);
        WeightField w = WeightField::inverse_boundary_distance(hpw);
        auto sol = geodesic_solve({-1.0, 1.0}, {1.0, 1.0}, w, eu, quick_params(16, 3));
        GridOracleParams fine;
        fine.resolution = 256;
        fine.neighborhood = 16;
        auto res = grid_oracle({-1.0, 1.0}, {1.0, 1.0}, w, lattice, eu, fine);
        double bias = (res.metrication_factor - 1.0) * res.value + 3.0 * res.cell;
        CHECK(sol.objective <= res.value + bias);
    }
    SUBCASE("validation") {
        GridOracleParams bad;
        bad.resolution = 16;
        CHECK_THROWS_AS(grid_oracle({0.2, 0.2}, {0.8, 0.8}, one, box, eu, bad),
                        std::invalid_argument);
        CHECK_THROWS_AS(grid_oracle({-2.0, 0.2}, {0.8, 0.8}, one, box, eu, gp),
                        std::invalid_argument);
    }
}

TEST_CASE("steiner: equilateral triangle reaches the Fermat tree") {
    NormSpec eu = NormSpec::Euclidean(2);
    std::vector<Vec> t = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}};
    WeightField one = WeightField::constant(1.0, eu);
    SolveParams p = quick_params(1, 0);
    p.step_tolerance = 1e-9;
    auto res = steiner_solve(t, one, eu, p);
    double want = fermat_oracle(t, eu);
    CHECK(want == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    CHECK(res.objective == doctest::Approx(want).epsilon(1e-4));
    CHECK(res.network.terminals.size() == 3);
    validate_network(res.network);
    // every terminal appears among the vertices
    for (const auto& term : t) {
        bool found = false;
        for (const auto& v : res.network.vertices)
            if (norm_dist(eu, v, term) < 1e-12) found = true;
        CHECK(found);
    }
}

TEST_CASE("steiner: collinear terminals collapse to the covering segment") {
    NormSpec p3 = NormSpec::Lp(3.0, 2);
    std::vector<Vec> t = {{0.0, 0.0}, {0.4, 0.0}, {1.0, 0.0}};
    WeightField one = WeightField::constant(1.0, p3);
    SolveParams p = quick_params(1, 0);
    auto res = steiner_solve(t, one, p3, p);
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("steiner: unit square reaches the double-Y tree") {
    NormSpec eu = NormSpec::Euclidean(2);
    std::vector<Vec> t = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    WeightField one = WeightField::constant(1.0, eu);
    SolveParams p = quick_params(1, 0);
    p.step_tolerance = 1e-9;
    auto res = steiner_solve(t, one, eu, p);
    CHECK(res.objective == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-3));
    validate_network(res.network);
}

TEST_CASE("three-dimensional unit-weight geodesic stays on the segment") {
    NormSpec p3 = NormSpec::Lp(3.0, 3);
    WeightField one = WeightField::constant(1.0, p3);
    Vec x0{0.0, 0.0, 0.0}, x1{0.6, -0.3, 0.8};
    auto res = geodesic_solve(x0, x1, one, p3, quick_params(8, 1, 1e-7));
    CHECK(res.objective == doctest::Approx(norm_dist(p3, x0, x1)).epsilon(1e-6));
}

TEST_CASE("solver validation") {
    NormSpec eu = NormSpec::Euclidean(2);
    WeightField one = WeightField::constant(1.0, eu);
    CHECK_THROWS_AS(geodesic_solve({0.0, 0.0}, {0.0, 0.0}, one, eu, quick_params()),
                    std::invalid_argument);
    std::vector<Vec> dup = {{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(steiner_solve(dup, one, eu, quick_params()), std::invalid_argument);
    SolveParams bad;
    bad.initial_segments = 0;
    CHECK_THROWS_AS(geodesic_solve({0.0, 0.0}, {1.0, 0.0}, one, eu, bad),
                    std::invalid_argument);
}
