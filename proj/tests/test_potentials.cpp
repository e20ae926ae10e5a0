#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "leakyline/config.hpp"
#include "leakyline/potentials.hpp"

using namespace leakyline;

TEST_CASE("sample values of the basic profiles") {
    auto b = LinePotential::box(-1, 0, 1);
    double pts[3] = {-2, 0, 2};
    auto v = b.sample(pts);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == -1.0);
    CHECK(v[2] == 0.0);

    auto g = LinePotential::gaussian(-1, 0, 1);
    CHECK(g(0) == doctest::Approx(-1.0));

    auto s = LinePotential::box(-1, 0, 1) + LinePotential::box(0.5, 0, 2);
    CHECK(s(0) == doctest::Approx(-0.5));
}

TEST_CASE("sample is additive in profile sums") {
    auto p = LinePotential::gaussian(-0.7, 0.3, 1.2);
    auto q = LinePotential::box(0.4, -1, 2);
    auto sum = p + q;
    for (double x : {-3.0, -1.0, 0.0, 0.3, 1.9, 5.0})
        CHECK(sum(x) == doctest::Approx(p(x) + q(x)).epsilon(1e-15));
}

TEST_CASE("check_vanishing") {
    CHECK(LinePotential::zero().check_vanishing(1e-8).vanishes);
    CHECK(LinePotential::zero().check_vanishing(1e-8).L == 0.0);

    auto g = LinePotential::gaussian(-1, 0, 1);
    auto r = g.check_vanishing(1e-6);
    CHECK(r.vanishes);
    // e^{-L^2/2} = 1e-6  =>  L = sqrt(2 ln 1e6)
    CHECK(r.L == doctest::Approx(std::sqrt(2.0 * std::log(1e6))).epsilon(0.01));

    CHECK_FALSE(LinePotential::constant(-0.5).check_vanishing(1e-6).vanishes);
}

TEST_CASE("check_vanishing monotone in tol") {
    auto g = LinePotential::gaussian(-2, 1, 0.8) + LinePotential::box(0.3, -2, 1);
    auto r1 = g.check_vanishing(1e-8);
    auto r2 = g.check_vanishing(1e-4);
    REQUIRE(r1.vanishes);
    REQUIRE(r2.vanishes);
    CHECK(r2.L <= r1.L + 1e-12);
}

TEST_CASE("exponential decay certificates") {
    auto b = LinePotential::box(-1, 0, 2);
    auto cb = b.exponential_decay();
    REQUIRE(cb.has_value());
    CHECK(cb->C == 1.0);
    CHECK(cb->K == doctest::Approx(std::exp(2.0)));

    auto g = LinePotential::gaussian(-1, 0, 1);
    auto cg = g.exponential_decay();
    REQUIRE(cg.has_value());
    CHECK(cg->C == 1.0);
    CHECK(std::isfinite(cg->K));
    // certificate really bounds the profile on a dense grid
    for (int i = 0; i <= 2000; ++i) {
        double x = -10 + 20.0 * i / 2000;
        CHECK(std::abs(g(x)) * std::exp(std::abs(x)) <= cg->K * (1 + 1e-9));
    }

    std::vector<double> xs{-1, 0, 1}, vs{0.5, 1.0, 0.5};
    CHECK_FALSE(LinePotential::tabulated(xs, vs).exponential_decay().has_value());
}

TEST_CASE("signed square root convention") {
    for (double v : {-4.0, -0.25, 0.0, 0.09, 7.0}) {
        CHECK(signed_sqrt(v) * std::sqrt(std::abs(v)) == doctest::Approx(v).epsilon(1e-15));
    }
}

TEST_CASE("tabulated profiles interpolate and vanish outside the range") {
    std::vector<double> xs{-1, 0, 1}, vs{0, -2, 0};
    auto t = LinePotential::tabulated(xs, vs);
    CHECK(t(-0.5) == doctest::Approx(-1.0));
    CHECK(t(2.0) == 0.0);
    CHECK(t.sup_norm() == doctest::Approx(2.0));
    CHECK_THROWS(LinePotential::tabulated(std::vector<double>{0, 1, 3},
                                          std::vector<double>{1, 1, 1}));
}

TEST_CASE("profile expression parser") {
    auto p = parse_profile("box(-1, 0, 1) + 0.5 * gaussian(-1, 0, 2)");
    CHECK(p(0) == doctest::Approx(-1.5));
    CHECK(p(4) == doctest::Approx(-0.5 * std::exp(-2.0)));
    CHECK_THROWS_AS(parse_profile("spline(1,2)"), config_error);
    auto z = parse_profile("zero");
    CHECK(z.is_zero());
}

TEST_CASE("model config validation") {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 0;
    CHECK_THROWS(cfg.validate());
    cfg.alpha = 1;
    cfg.a = -1;
    CHECK_THROWS(cfg.validate());
}
