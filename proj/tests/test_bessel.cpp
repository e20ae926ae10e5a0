#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "leakyline/bessel.hpp"

using namespace leakyline;

TEST_CASE("K0 and K1 match the standard library on the real axis") {
    for (double x : {0.05, 0.3, 1.0, 2.0, 3.9, 4.1, 7.0, 12.0, 18.9, 19.1, 30.0, 60.0}) {
        double k0 = std::cyl_bessel_k(0.0, x);
        double k1 = std::cyl_bessel_k(1.0, x);
        CHECK(bessel_k0(cplx(x, 0)).real() == doctest::Approx(k0).epsilon(1e-12));
        CHECK(std::abs(bessel_k0(cplx(x, 0)).imag()) < 1e-14 * (1 + k0));
        CHECK(bessel_k1(cplx(x, 0)).real() == doctest::Approx(k1).epsilon(1e-12));
    }
}

TEST_CASE("complex arguments: Schwarz reflection and the Wronskian-free sanity") {
    for (cplx u : {cplx(0.7, 0.4), cplx(2.5, -1.0), cplx(5.0, 2.0), cplx(10.0, -6.0),
                   cplx(21.0, 4.0)}) {
        cplx a = bessel_k0(u), b = bessel_k0(std::conj(u));
        CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
        // derivative identity K0' = -K1 via central differences
        cplx h(1e-6, 0);
        cplx fd = (bessel_k0(u + h) - bessel_k0(u - h)) / (2.0 * h);
        CHECK(std::abs(fd + bessel_k1(u)) < 1e-7 * (1 + std::abs(fd)));
    }
}

TEST_CASE("K0 across the evaluation-regime boundaries is continuous") {
    // a regime mismatch would show up as a jump far above the slope term
    for (double r : {4.0, 19.0}) {
        for (double th : {-0.9, -0.3, 0.0, 0.4, 1.1}) {
            cplx dir = std::exp(cplx(0, th));
            if ((r * dir).real() <= 0.2) continue;
            cplx below = bessel_k0(r * (1 - 1e-9) * dir);
            cplx above = bessel_k0(r * (1 + 1e-9) * dir);
            CHECK(std::abs(above - below) < 3e-7 * std::abs(above));
        }
    }
}

TEST_CASE("running integral of K0") {
    // int_0^inf K0 = pi/2; check saturation and small-argument series vs quadrature
    CHECK(bessel_k0_integral(cplx(30.0, 0)).real() == doctest::Approx(pi / 2).epsilon(1e-12));
    for (double w : {0.3, 1.0, 3.0, 6.0}) {
        // independent oracle: substitute t = e^u, trapezoid on the smooth
        // integrand e^u K0(e^u) from u = -40 (vanishing) to ln w
        int n = 400000;
        double ulo = -40.0, uhi = std::log(w), acc = 0;
        for (int i = 0; i <= n; ++i) {
            double u = ulo + (uhi - ulo) * i / n;
            double t = std::exp(u);
            double f = t * std::cyl_bessel_k(0.0, t);
            acc += (i == 0 || i == n) ? 0.5 * f : f;
        }
        acc *= (uhi - ulo) / n;
        CHECK(bessel_k0_integral(cplx(w, 0)).real() == doctest::Approx(acc).epsilon(1e-9));
    }
}

TEST_CASE("first moment closed form") {
    // int_0^w t K0(t) dt = 1 - w K1(w), against direct quadrature
    double w = 2.0;
    int n = 100000;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        double t0 = 1e-9 + (w - 1e-9) * i / n, t1 = 1e-9 + (w - 1e-9) * (i + 1) / n;
        acc += 0.5 * (t0 * std::cyl_bessel_k(0.0, t0) + t1 * std::cyl_bessel_k(0.0, t1)) * (t1 - t0);
    }
    CHECK(bessel_k0_first_moment(cplx(w, 0)).real() == doctest::Approx(acc).epsilon(1e-8));
}
