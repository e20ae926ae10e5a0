#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "leakyline/quadrature.hpp"
#include <doctest.h>

#include <cmath>
#include <random>

#include "leakyline/oracle.hpp"
#include "leakyline/transverse.hpp"

using namespace leakyline;

// frozen reference values, pinned by independent bisection on the secular
// equation and cross-checked by the finite-difference oracle
namespace ref {
constexpr double kappa0_21 = 1.10885755287855;   // alpha=2, a=1
constexpr double xi0_21 = -1.2295650725758;
constexpr double kappa1_21 = 0.79681213002002;
constexpr double xi1_21 = -0.634909570547041;
constexpr double kappa0_11 = 0.639232271380537;  // alpha=1, a=1
constexpr double xi0_11 = -0.40861789677432;
constexpr double kappa_gen_21 = 1.01658930151154;   // beta+ = 2, beta- = 1, a = 1
constexpr double kappa_gen_21b = 0.263180386427393; // second root
}  // namespace ref

TEST_CASE("equal-strength eigenvalues at alpha=2, a=1") {
    auto tv = solve_equal(2, 1);
    CHECK(tv.kappa0 == doctest::Approx(ref::kappa0_21).epsilon(1e-11));
    CHECK(tv.xi0 == doctest::Approx(ref::xi0_21).epsilon(1e-11));
    REQUIRE(tv.xi1.has_value());
    CHECK(*tv.kappa1 == doctest::Approx(ref::kappa1_21).epsilon(1e-11));
    CHECK(*tv.xi1 == doctest::Approx(ref::xi1_21).epsilon(1e-11));
    CHECK(tv.secular_residual(tv.kappa0) < 1e-12);
    CHECK(tv.secular_residual(*tv.kappa1) < 1e-12);
    CHECK(tv.count() == 2);
}

TEST_CASE("boundary case alpha*a = 1 has exactly one eigenvalue") {
    auto tv = solve_equal(1, 1);
    CHECK(tv.count() == 1);
    CHECK_FALSE(tv.xi1.has_value());
    CHECK(tv.kappa0 == doctest::Approx(ref::kappa0_11).epsilon(1e-10));
    CHECK(tv.xi0 == doctest::Approx(ref::xi0_11).epsilon(1e-10));
}

TEST_CASE("subcritical coupling keeps a single eigenvalue") {
    auto tv = solve_equal(0.5, 1);
    CHECK(tv.count() == 1);
    CHECK(tv.xi0 < 0);
}

TEST_CASE("bifurcation counting over a dense alpha*a sweep") {
    for (int i = 1; i <= 160; ++i) {
        double prod = 4.0 * i / 160.0;
        auto tv = solve_equal(prod, 1.0);
        int expected = prod <= 1.0 ? 1 : 2;
        CHECK(tv.count() == expected);
        CHECK(tv.secular_residual(tv.kappa0) < 1e-12);
        if (tv.kappa1) CHECK(tv.secular_residual(*tv.kappa1) < 1e-12);
    }
}

TEST_CASE("ordering and normalization of the eigenpairs") {
    auto tv = solve_equal(3, 0.9);
    REQUIRE(tv.xi1.has_value());
    CHECK(tv.xi0 < *tv.xi1);
    CHECK(*tv.xi1 < 0);
    CHECK(tv.kappa0 > tv.alpha / 2);
    CHECK(*tv.kappa1 < tv.alpha / 2);
    CHECK(std::abs(tv.phi0.norm_sq() - 1.0) < 1e-10);
    CHECK(std::abs(tv.phi1->norm_sq() - 1.0) < 1e-10);
    // interface condition psi'(a+0) - psi'(a-0) = -alpha psi(a), exact coefficients
    for (const TransverseEigenfunction* f : {&tv.phi0, &*tv.phi1}) {
        double jump = f->derivative(tv.a + 1e-14) - f->derivative(tv.a - 1e-14);
        CHECK(jump == doctest::Approx(-tv.alpha * (*f)(tv.a)).epsilon(1e-9));
    }
    // phi0 even and positive, phi1 odd with phi1(0) = 0 exactly
    CHECK(tv.phi0(0.7) == doctest::Approx(tv.phi0(-0.7)).epsilon(1e-14));
    CHECK(tv.phi0(0.0) > 0);
    CHECK(tv.phi0(tv.a) > 0);
    CHECK((*tv.phi1)(0.0) == 0.0);
    CHECK((*tv.phi1)(0.6) == doctest::Approx(-(*tv.phi1)(-0.6)).epsilon(1e-14));
    CHECK((*tv.phi1)(0.6) > 0);
}

TEST_CASE("Rayleigh quotient reproduces the eigenvalues") {
    auto tv = solve_equal(2, 1);
    GaussRule gl(12);
    auto rayleigh = [&](const TransverseEigenfunction& f) {
        // epsilon_alpha[phi] = int |phi'|^2 - alpha(|phi(a)|^2 + |phi(-a)|^2);
        // integrate piecewise (the derivative jumps at +-a)
        double R = 30.0, acc = 0;
        double cuts[4] = {-R, -tv.a, tv.a, R};
        for (int piece = 0; piece < 3; ++piece) {
            int panels = 200;
            double lo = cuts[piece], hi = cuts[piece + 1], w = (hi - lo) / panels;
            for (int p = 0; p < panels; ++p) {
                double mid = lo + (p + 0.5) * w;
                for (size_t i = 0; i < gl.x.size(); ++i) {
                    double d = f.derivative(mid + 0.5 * w * gl.x[i]);
                    acc += 0.5 * w * gl.w[i] * d * d;
                }
            }
        }
        return acc - tv.alpha * (f(tv.a) * f(tv.a) + f(-tv.a) * f(-tv.a));
    };
    CHECK(rayleigh(tv.phi0) == doctest::Approx(tv.xi0).epsilon(1e-8));
    CHECK(rayleigh(*tv.phi1) == doctest::Approx(*tv.xi1).epsilon(1e-8));
}

TEST_CASE("general secular solver reduces to the symmetric case") {
    auto tv = solve_equal(2, 1);
    auto roots = solve_general(2, 2, 1);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].kappa == doctest::Approx(tv.kappa0).epsilon(1e-10));
    CHECK(roots[1].kappa == doctest::Approx(*tv.kappa1).epsilon(1e-10));
}

TEST_CASE("general secular solver: repulsive pair is empty") {
    CHECK(solve_general(-1, -2, 1).empty());
    CHECK(solve_general(0, 0, 1).empty());
}

TEST_CASE("general secular solver pinned by the finite-difference oracle") {
    auto roots = solve_general(2, 1, 1);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].kappa == doctest::Approx(ref::kappa_gen_21).epsilon(1e-10));
    CHECK(roots[1].kappa == doctest::Approx(ref::kappa_gen_21b).epsilon(1e-10));
    // live cross-check against the FD oracle
    auto fd = fd_transverse(2, 1, 1, 30, 0.01, 2);
    CHECK(std::abs(fd.eigenvalues[0] - roots[0].energy) < 5 * fd.errbar + 1e-6);
    CHECK(std::abs(fd.eigenvalues[1] - roots[1].energy) < 5 * fd.errbar + 1e-6);
}

TEST_CASE("general solver handles strengths up to 1e3 by bracket rescaling") {
    // wide-separation regime: the two wells decouple and kappa -> beta/2
    auto roots = solve_general(1000, 2, 1);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].kappa == doctest::Approx(500.0).epsilon(1e-9));
    // the deep well acts as a near-Dirichlet wall, pushing the shallow root
    // below beta/2 = 1: 2k - 2 = 2000 e^{-4k} / (2k - 1000)
    CHECK(roots[1].kappa > 0.95);
    CHECK(roots[1].kappa < 1.0);
    double k = roots[1].kappa;
    double res = (2 * k - 1000) * (2 * k - 2) - 2000 * std::exp(-4 * k);
    CHECK(std::abs(res) < 1e-8 * 1000);
    // lambda~ stays finite and positive for a strongly repulsive argument
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    double lt = lambda_tilde(-998, 0, cfg);
    CHECK(std::isfinite(lt));
    CHECK(lt < 0);  // much deeper well lowers the threshold
    CHECK(lambda_tilde(998, 500, cfg) > 0);
}

TEST_CASE("single-interaction degenerate strengths") {
    auto roots = solve_general(2, 0, 1);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].kappa == doctest::Approx(1.0));  // kappa = beta/2
    auto roots2 = solve_general(0, 3, 0.7);
    REQUIRE(roots2.size() == 1);
    CHECK(roots2[0].kappa == doctest::Approx(1.5));
}

TEST_CASE("lambda_tilde basics") {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    auto tv = solve_equal(2, 1);
    CHECK(std::abs(lambda_tilde(0, 0, cfg)) < 1e-10);
    // both strengths neutralized: no bound state, lowest point 0
    CHECK(lambda_tilde(cfg.alpha, cfg.alpha, cfg) == doctest::Approx(-tv.xi0).epsilon(1e-10));
    CHECK(lambda_tilde(0.5, 0, cfg) > 0);
    CHECK(lambda_tilde(0.01, 0, cfg) > 0);
}

TEST_CASE("lambda_tilde symmetry and monotonicity on random pairs") {
    ModelConfig cfg;
    cfg.alpha = 1.7;
    cfg.a = 0.8;
    auto tv = solve_equal(cfg.alpha, cfg.a);
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> U(-1.5, 3.0);
    for (int t = 0; t < 120; ++t) {
        double u = U(rng), v = U(rng);
        double luv = lambda_tilde(u, v, tv), lvu = lambda_tilde(v, u, tv);
        CHECK(luv == doctest::Approx(lvu).epsilon(1e-9));
        double bump = std::abs(U(rng)) * 0.5;
        CHECK(lambda_tilde(u + bump, v, tv) >= luv - 1e-9);
        CHECK(lambda_tilde(u, v + bump, tv) >= luv - 1e-9);
    }
}

TEST_CASE("lambda_field vanishes off the support of compactly supported V") {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    cfg.v_plus = LinePotential::box(0.5, 0, 1);
    cfg.v_minus = LinePotential::zero();
    std::vector<double> nodes{-3, -1.5, -0.5, 0, 0.5, 1.5, 3};
    auto lam = lambda_field(cfg, nodes);
    CHECK(lam[0] == doctest::Approx(0.0));
    CHECK(lam[1] == doctest::Approx(0.0));
    CHECK(lam[3] > 0);
    CHECK(lam[6] == doctest::Approx(0.0));
    // pointwise equality with direct lambda_tilde
    auto tv = solve_equal(2, 1);
    CHECK(lam[3] == doctest::Approx(lambda_tilde(0.5, 0.0, tv)));
}

TEST_CASE("dirichlet half-line threshold") {
    auto d = dirichlet_halfline(2, 1);
    REQUIRE(d.xi1.has_value());
    CHECK(d.mu0 == doctest::Approx(ref::xi1_21).epsilon(1e-10));

    auto d2 = dirichlet_halfline(1, 1);
    CHECK_FALSE(d2.xi1.has_value());
    CHECK(d2.mu0 == 0.0);

    auto d3 = dirichlet_halfline(1.0001, 1);
    REQUIRE(d3.xi1.has_value());
    CHECK(*d3.xi1 < 0);
    CHECK(*d3.xi1 > -1e-3);
}

TEST_CASE("1D finite-difference oracle agrees with the secular solution") {
    auto tv = solve_equal(2, 1);
    auto fd = fd_transverse(2, 2, 1, 25, 0.01, 2);
    CHECK(std::abs(fd.eigenvalues[0] - tv.xi0) < 1e-3);
    CHECK(std::abs(fd.eigenvalues[1] - *tv.xi1) < 1e-3);
    // h-convergence: drift shrinks by a factor >= 1.7
    auto c1 = fd_transverse_single(2, 2, 1, 25, 0.02, 1);
    auto c2 = fd_transverse_single(2, 2, 1, 25, 0.01, 1);
    auto c3 = fd_transverse_single(2, 2, 1, 25, 0.005, 1);
    CHECK(std::abs(c1[0] - c2[0]) / std::abs(c2[0] - c3[0]) >= 1.7);
}
