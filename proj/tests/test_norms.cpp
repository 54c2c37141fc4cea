#include <doctest.h>

#include "wsteiner/norms.hpp"

using namespace wsteiner;

TEST_CASE("norm_eval basics") {
    NormSpec p3 = NormSpec::Lp(3.0, 2);
    CHECK(norm_eval(p3, {1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(norm_eval(NormSpec::Linf(2), {1.0, 1.0}) == doctest::Approx(1.0));
    // (1+1)^{1/3}
    CHECK(norm_eval(p3, {1.0, 1.0}) == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("euclidean agrees with lp p=2 exactly") {
    NormSpec eu = NormSpec::Euclidean(3);
    NormSpec p2 = NormSpec::Lp(2.0, 3);
    Rng rng(7);
    for (int k = 0; k < 200; ++k) {
        Vec x{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(norm_eval(eu, x) == norm_eval(p2, x));
    }
}

TEST_CASE("homogeneity and triangle inequality") {
    Rng rng(11);
    for (double p : {1.5, 2.0, 3.0, 16.0}) {
        NormSpec spec = NormSpec::Lp(p, 2);
        for (int k = 0; k < 200; ++k) {
            Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            Vec y{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            double s = rng.uniform(-3, 3);
            CHECK(norm_eval(spec, scale(x, s)) ==
                  doctest::Approx(std::abs(s) * norm_eval(spec, x)).epsilon(1e-12));
            CHECK(norm_eval(spec, add(x, y)) <=
                  norm_eval(spec, x) + norm_eval(spec, y) + 1e-12);
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(norm_eval(NormSpec::Lp(3.0, 2), {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::Lp(1.05, 2), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::Lp(17.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::Lp(2.0, 1), std::invalid_argument);
}

TEST_CASE("dual norm") {
    // dual of lp is lq with 1/p + 1/q = 1; linf dual is l1
    NormSpec p3 = NormSpec::Lp(3.0, 2);
    CHECK(dual_norm_eval(p3, {1.0, 1.0}) == doctest::Approx(std::pow(2.0, 1.0 / 1.5)));
    CHECK(dual_norm_eval(NormSpec::Linf(2), {1.0, -2.0}) == doctest::Approx(3.0));
    // Holder: |<g, x>| <= ||g||_* ||x||
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        Vec g{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(std::abs(dot(g, x)) <= dual_norm_eval(p3, g) * norm_eval(p3, x) + 1e-12);
    }
}

TEST_CASE("unit circle points have unit norm") {
    for (double p : {1.5, 4.0}) {
        NormSpec spec = NormSpec::Lp(p, 2);
        for (int k = 0; k < 64; ++k) {
            Vec v = unit_circle_point(spec, 2 * M_PI * k / 64.0);
            CHECK(norm_eval(spec, v) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}
