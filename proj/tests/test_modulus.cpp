#include <doctest.h>

#include "test_oracles.hpp"
#include "wsteiner/modulus.hpp"

using namespace wsteiner;

TEST_CASE("euclidean modulus matches the closed form") {
    NormSpec eu = NormSpec::Euclidean(2);
    // brute-force value at eps = 1: 1 - sqrt(3)/2
    CHECK(modulus_of_convexity(eu, 1.0) ==
          doctest::Approx(1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-6));
    for (double eps : {0.25, 0.75, 1.5, 1.9}) {
        CHECK(modulus_of_convexity(eu, eps) ==
              doctest::Approx(oracle::euclid_delta(eps)).epsilon(1e-7));
    }
    // eps = 2 forces antipodal pairs and midpoint 0; the chord constraint is
    // resolved to the angle tolerance, so the depth lands within ~1e-8 of 1
    CHECK(modulus_of_convexity(eu, 2.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("linf modulus vanishes identically") {
    NormSpec linf = NormSpec::Linf(2);
    for (double eps : {0.3, 0.7, 1.0, 1.7, 2.0})
        CHECK(modulus_of_convexity(linf, eps) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("lp modulus against the independent pair-grid oracle") {
    for (double p : {1.5, 4.0}) {
        NormSpec spec = NormSpec::Lp(p, 2);
        for (double eps : {0.5, 1.0}) {
            double got = modulus_of_convexity(spec, eps);
            double want = oracle::brute_force_delta_2d(spec, eps);
            CHECK(got == doctest::Approx(want).epsilon(5e-4));
            CHECK(got <= want + 1e-9);  // the oracle samples fewer pairs
        }
    }
}

TEST_CASE("modulus properties: monotone, bounded by eps^2, positive iff rotund") {
    for (double p : {1.5, 3.0}) {
        NormSpec spec = NormSpec::Lp(p, 2);
        double prev = 0;
        for (double eps : {0.2, 0.6, 1.0, 1.4, 1.8}) {
            double d = modulus_of_convexity(spec, eps);
            CHECK(d >= prev - 1e-9);
            CHECK(d <= eps * eps + 1e-9);
            CHECK(d > 0);
            prev = d;
        }
    }
}

TEST_CASE("dim 3 sections reproduce the planar lp modulus") {
    SearchParams sp;
    sp.coarse_angles = 512;
    sp.sections = 32;
    double d3 = modulus_of_convexity(NormSpec::Lp(3.0, 3), 1.0, sp);
    double d2 = modulus_of_convexity(NormSpec::Lp(3.0, 2), 1.0, sp);
    CHECK(d3 == doctest::Approx(d2).epsilon(1e-5));
}

TEST_CASE("modulus_inverse") {
    NormSpec eu = NormSpec::Euclidean(2);
    ModulusCurve curve = build_modulus_curve(eu, log_eps_grid(1e-3, 96));

    SUBCASE("inverse at a grid value returns the eps") {
        double t = curve.delta_values[60];
        CHECK(modulus_inverse(curve, t) ==
              doctest::Approx(curve.eps_grid[60]).epsilon(1e-6));
    }
    SUBCASE("t >= 1 gives the cap 2") {
        CHECK(modulus_inverse(curve, 1.0) == doctest::Approx(2.0));
        CHECK(modulus_inverse(curve, 3.0) == doctest::Approx(2.0));
    }
    SUBCASE("bisection oracle at t = 0.01") {
        // solve 1 - sqrt(1 - eps^2/4) = 0.01
        double want = oracle::euclid_delta_inverse(0.01);
        CHECK(want == doctest::Approx(0.2821347).epsilon(1e-5));
        CHECK(modulus_inverse(curve, 0.01) == doctest::Approx(want).epsilon(2e-3));
    }
    SUBCASE("round trip: inverse(delta_i) >= eps_i") {
        for (std::size_t i = 0; i < curve.eps_grid.size(); i += 7)
            if (curve.delta_values[i] > 0)
                CHECK(modulus_inverse(curve, curve.delta_values[i]) >=
                      curve.eps_grid[i] - 1e-9);
    }
    SUBCASE("t <= 0 rejected") {
        CHECK_THROWS_AS(modulus_inverse(curve, 0.0), std::invalid_argument);
    }
    SUBCASE("nondecreasing in t") {
        Rng rng(23);
        for (int k = 0; k < 200; ++k) {
            double t1 = std::pow(10.0, rng.uniform(-8, 0));
            double t2 = t1 * rng.uniform(1.0, 10.0);
            CHECK(modulus_inverse(curve, t1) <= modulus_inverse(curve, t2) + 1e-12);
        }
    }
}

TEST_CASE("local modulus") {
    NormSpec eu = NormSpec::Euclidean(2);
    SUBCASE("euclidean: rotational symmetry reduces to the global modulus") {
        for (double theta : {0.0, 0.9, 2.3}) {
            Vec v = unit_circle_point(eu, theta);
            CHECK(local_modulus(eu, v, 1.0) ==
                  doctest::Approx(1.0 - std::sqrt(3.0) / 2.0).epsilon(1e-6));
        }
    }
    SUBCASE("dominates the global modulus and stays positive") {
        NormSpec p4 = NormSpec::Lp(4.0, 2);
        Vec e1{1.0, 0.0};
        double local = local_modulus(p4, e1, 0.5);
        double global = modulus_of_convexity(p4, 0.5);
        CHECK(local >= global - 1e-9);
        CHECK(local > 0);
    }
    SUBCASE("agrees with the dense disk-scan oracle") {
        NormSpec p4 = NormSpec::Lp(4.0, 2);
        Vec diag = unit_circle_point(p4, M_PI / 4);
        double got = local_modulus(p4, diag, 0.5);
        double want = oracle::brute_force_local_modulus(p4, diag, 0.5);
        CHECK(got <= want + 1e-9);  // implementation searches a denser family
        CHECK(got == doctest::Approx(want).epsilon(5e-3));
    }
    SUBCASE("quadratic behavior on the diagonal of l4") {
        NormSpec p4 = NormSpec::Lp(4.0, 2);
        Vec diag = unit_circle_point(p4, M_PI / 4);
        std::vector<double> eps, del;
        for (int k = 2; k <= 6; ++k) {
            eps.push_back(std::pow(2.0, -k));
            del.push_back(local_modulus(p4, diag, eps.back()));
        }
        double expo = fit_loglog_exponent(eps, del);
        CHECK(expo == doctest::Approx(2.0).epsilon(0.06));
        CHECK(del.back() > 0);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(local_modulus(NormSpec::Linf(2), {1.0, 0.0}, 0.5), std::domain_error);
        CHECK_THROWS_AS(local_modulus(eu, {1.0, 0.5}, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(local_modulus(eu, {1.0, 0.0}, 1.5), std::invalid_argument);
    }
}

TEST_CASE("tangent second derivative") {
    NormSpec eu = NormSpec::Euclidean(2);
    NormSpec p4 = NormSpec::Lp(4.0, 2);
    SUBCASE("euclidean circle has curvature term 1") {
        for (double theta : {0.1, 1.2, 4.0})
            CHECK(tangent_second_derivative(eu, unit_circle_point(eu, theta)) ==
                  doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("l4 flattens at the axes") {
        CHECK(tangent_second_derivative(p4, {1.0, 0.0}) < kGMembershipThreshold);
        CHECK(tangent_second_derivative(p4, {0.0, -1.0}) < kGMembershipThreshold);
    }
    SUBCASE("lp diagonal curvature equals p - 1") {
        // ||v + t e_v|| along the diagonal expands to (1 + p(p-1)t^2/2 + ...)^{1/p}
        Vec diag4 = unit_circle_point(p4, M_PI / 4);
        CHECK(tangent_second_derivative(p4, diag4) == doctest::Approx(3.0).epsilon(1e-6));
        NormSpec p3 = NormSpec::Lp(3.0, 2);
        Vec diag3 = unit_circle_point(p3, M_PI / 4);
        CHECK(tangent_second_derivative(p3, diag3) == doctest::Approx(2.0).epsilon(1e-6));
    }
    SUBCASE("continuity along the circle") {
        for (const NormSpec& spec : {eu, p4}) {
            double prev = tangent_second_derivative(spec, unit_circle_point(spec, 0.0));
            double dtheta = 2 * M_PI / 720;
            for (int k = 1; k <= 720; ++k) {
                double cur =
                    tangent_second_derivative(spec, unit_circle_point(spec, k * dtheta));
                CHECK(std::abs(cur - prev) <= 100.0 * dtheta);
                prev = cur;
            }
        }
    }
    SUBCASE("non-smooth families rejected") {
        CHECK_THROWS_AS(tangent_second_derivative(NormSpec::Linf(2), {1.0, 0.0}),
                        std::domain_error);
        CHECK_THROWS_AS(tangent_second_derivative(NormSpec::Lp(1.5, 2), {1.0, 0.0}),
                        std::domain_error);
    }
}

TEST_CASE("modulus curve validation") {
    ModulusCurve bad;
    bad.norm = NormSpec::Euclidean(2);
    bad.eps_grid = {0.5, 1.0};
    bad.delta_values = {0.2, 0.1};  // decreasing
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.delta_values = {0.5, 0.6};  // 0.5 > 0.25 = eps^2
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
