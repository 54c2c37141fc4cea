#include <doctest.h>

#include "wsteiner/quasihyp.hpp"
#include "wsteiner/suite.hpp"

using namespace wsteiner;

namespace {

SolveParams qh_params(int segments = 16, int rounds = 3) {
    SolveParams p;
    p.initial_segments = segments;
    p.refine_rounds = rounds;
    p.step_tolerance = 1e-5;
    p.seed = 42;
    return p;
}

}  // namespace

TEST_CASE("vertical pair on the half-plane window: distance 1") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    auto res = quasihyp_distance(hpw, {0.0, 1.0}, {0.0, std::exp(1.0)}, qh_params());
    CHECK(res.distance == doctest::Approx(1.0).epsilon(1e-3));
    // the geodesic is the vertical segment
    for (const auto& p : res.geodesic.points) CHECK(std::abs(p[0]) < 1e-3);
    CHECK(res.eta > 0.9);
    CHECK(res.length_bound >= res.geodesic.total_length());
}

TEST_CASE("horizontal pair: arccosh(3) within 1%") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    auto res = quasihyp_distance(hpw, {-1.0, 1.0}, {1.0, 1.0}, qh_params(16, 4));
    CHECK(res.distance == doctest::Approx(std::acosh(3.0)).epsilon(0.01));
    CHECK(res.length_bound >= res.geodesic.total_length());
}

TEST_CASE("radial pair in the unit disk: log 2") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain disk = Domain::ball({0.0, 0.0}, 1.0, eu);
    auto res = quasihyp_distance(disk, {0.0, 0.0}, {0.5, 0.0}, qh_params(16, 3));
    CHECK(res.distance == doctest::Approx(std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("symmetry and triangle inequality") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    SolveParams p = qh_params(16, 3);
    Vec a{-0.8, 0.9}, b{0.7, 1.3}, c{0.1, 0.6};
    double ab = quasihyp_distance(hpw, a, b, p).distance;
    double ba = quasihyp_distance(hpw, b, a, p).distance;
    CHECK(std::abs(ab - ba) <= 2e-3);
    double bc = quasihyp_distance(hpw, b, c, p).distance;
    double ac = quasihyp_distance(hpw, a, c, p).distance;
    CHECK(ac <= ab + bc + 3e-3);
}

TEST_CASE("monotone domain comparison: larger boxes shrink the distance") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain small = Domain::box({-1.0, -1.0}, {1.0, 1.0}, eu);
    Domain large = Domain::box({-2.0, -2.0}, {2.0, 2.0}, eu);
    SolveParams p = qh_params(16, 3);
    Vec a{-0.4, 0.1}, b{0.5, -0.2};
    double ds = quasihyp_distance(small, a, b, p).distance;
    double dl = quasihyp_distance(large, a, b, p).distance;
    CHECK(dl <= ds + 1e-6);
}

TEST_CASE("endpoints outside the domain are rejected") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain disk = Domain::ball({0.0, 0.0}, 1.0, eu);
    CHECK_THROWS_AS(quasihyp_distance(disk, {0.0, 0.0}, {1.5, 0.0}, qh_params()),
                    std::invalid_argument);
}

TEST_CASE("regularity report on a straight geodesic: zero oscillation") {
    NormSpec eu = NormSpec::Euclidean(2);
    Domain hpw = Domain::half_plane_window(16.0, 100.0, eu);
    auto res = quasihyp_distance(hpw, {0.0, 1.0}, {0.0, std::exp(1.0)}, qh_params(16, 3));
    auto rep = quasihyp_regularity_report(res.geodesic, hpw, shared_curve(eu));
    CHECK(rep.bound_holds);
    CHECK(rep.fitted_constant == doctest::Approx(1.0));
    for (double o : rep.oscillations) CHECK(o <= 1e-3);
}

TEST_CASE("regularity report on the euclidean hyperbolic geodesic") {
    auto sc = make_hyperbolic_geodesic(NormSpec::Euclidean(2), 0, 256);
    auto rep = quasihyp_regularity_report(sc.solution.geodesic, sc.domain,
                                          shared_curve(sc.norm));
    CHECK(rep.bound_holds);
    CHECK(rep.fitted_constant <= 100.0);
    // omega inherits the euclidean exponent 1/2; the measured secant
    // oscillation of a C^{1,1} curve can only beat the guaranteed 1/2
    CHECK(rep.omega_exponent == doctest::Approx(0.5).epsilon(0.05));
    CHECK(rep.osc_exponent >= 0.4);
}

TEST_CASE("regularity report on the l4 analog: exponent 1/4 bound holds") {
    auto sc = make_hyperbolic_geodesic(NormSpec::Lp(4.0, 2), 0, 256);
    auto rep = quasihyp_regularity_report(sc.solution.geodesic, sc.domain,
                                          shared_curve(sc.norm));
    CHECK(rep.bound_holds);
    CHECK(rep.omega_exponent == doctest::Approx(0.25).epsilon(0.05));
}
