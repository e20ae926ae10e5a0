#include "leakyline/bessel.hpp"

#include <cmath>

namespace leakyline {

namespace {

// series K0(u) = -(ln(u/2)+gamma) I0(u) + sum_{k>=1} H_k (u^2/4)^k / (k!)^2
cplx k0_series(cplx u) {
    cplx q = 0.25 * u * u;
    cplx i0 = 1.0, term = 1.0, corr = 0.0;
    double hk = 0.0;
    for (int k = 1; k <= 40; ++k) {
        term *= q / double(k * k);
        hk += 1.0 / double(k);
        i0 += term;
        corr += term * hk;
        if (std::abs(term) < 1e-18 * (std::abs(i0) + 1)) break;
    }
    return -(std::log(0.5 * u) + euler_gamma) * i0 + corr;
}

cplx k1_series(cplx u) {
    // K1(u) = 1/u + ln(u/2) I1(u) - (u/4) sum_k [psi(k+1)+psi(k+2)] (u^2/4)^k / (k!(k+1)!)
    cplx q = 0.25 * u * u;
    cplx i1 = 0.5 * u, term = 0.5 * u;
    for (int k = 1; k <= 40; ++k) {
        term *= q / double(k * (k + 1));
        i1 += term;
        if (std::abs(term) < 1e-18 * (std::abs(i1) + 1)) break;
    }
    cplx s = 0.0, t2 = 1.0;
    double psi1 = -euler_gamma, psi2 = 1.0 - euler_gamma;
    for (int k = 0; k <= 40; ++k) {
        if (k > 0) {
            t2 *= q / double(k * (k + 1));
            psi1 += 1.0 / double(k);
            psi2 += 1.0 / double(k + 1);
        }
        cplx add = (psi1 + psi2) * t2;
        s += add;
        if (k > 2 && std::abs(add) < 1e-18 * (std::abs(s) + 1)) break;
    }
    return 1.0 / u + std::log(0.5 * u) * i1 - 0.25 * u * s;
}

// asymptotic K_nu(u) ~ sqrt(pi/2u) e^{-u} sum a_k(nu)/u^k, truncated at the
// smallest term; accurate to ~1e-14 for |u| >= 19.
cplx k_asymptotic(int nu, cplx u) {
    double mu = 4.0 * nu * nu;
    cplx sum = 1.0, term = 1.0;
    double prev = 1e300;
    for (int k = 1; k <= 30; ++k) {
        double num = mu - double((2 * k - 1) * (2 * k - 1));
        term *= num / (8.0 * double(k)) / u;
        double mag = std::abs(term);
        if (mag > prev) break;  // asymptotic series started diverging
        sum += term;
        prev = mag;
        if (mag < 1e-17) break;
    }
    return std::sqrt(pi / (2.0 * u)) * std::exp(-u) * sum;
}

// trapezoid on int_0^inf exp(-u cosh t) (cosh t)^m dt; geometric convergence
// since the integrand is even-analytic around t=0 and decays doubly fast.
cplx k_coshint(int m, cplx u) {
    double re = u.real();
    if (!(re > 0)) throw numeric_error("bessel: argument must have Re > 0");
    // need Re(u) cosh(T) > 42 + m*T
    double T = std::acosh(std::max(2.0, 46.0 / re));
    int n = 160;
    double h = T / n;
    cplx s = 0.5 * std::exp(-u);  // t = 0 endpoint, cosh^m = 1
    for (int i = 1; i <= n; ++i) {
        double c = std::cosh(h * i);
        cplx e = std::exp(-u * c);
        s += (m == 0) ? e : e * std::pow(c, m);
    }
    return s * h;
}

}  // namespace

cplx bessel_k0(cplx u) {
    double r = std::abs(u);
    if (r == 0) throw numeric_error("bessel_k0: zero argument");
    if (r <= 4.0) return k0_series(u);
    if (r >= 19.0) return k_asymptotic(0, u);
    return k_coshint(0, u);
}

cplx bessel_k1(cplx u) {
    double r = std::abs(u);
    if (r == 0) throw numeric_error("bessel_k1: zero argument");
    if (r <= 4.0) return k1_series(u);
    if (r >= 19.0) return k_asymptotic(1, u);
    return k_coshint(1, u);
}

namespace {

// int_0^w K0 by termwise integration of the small-argument series
cplx psi_series(cplx w) {
    cplx q = 0.25 * w * w;
    cplx lg = std::log(0.5 * w) + euler_gamma;
    // sum over k >= 0 of c_k w^{2k+1}/(2k+1) * [ -(lg - 1/(2k+1)) + H_k ]
    cplx out = 0.0, pw = w;  // w^{2k+1}
    double hk = 0, cfac = 1;  // 1/(4^k (k!)^2) running
    for (int k = 0; k <= 40; ++k) {
        if (k > 0) {
            cfac /= 4.0 * k * k;
            hk += 1.0 / k;
            pw *= w * w;
        }
        double inv = 1.0 / double(2 * k + 1);
        cplx add = cfac * pw * inv * (-(lg - inv) + hk);
        out += add;
        if (k > 3 && std::abs(add) < 1e-18 * (std::abs(out) + 1e-30)) break;
    }
    return out;
}

}  // namespace

cplx bessel_k0_integral(cplx w) {
    double r = std::abs(w);
    if (r == 0) return 0.0;
    if (!(w.real() > 0)) throw numeric_error("bessel_k0_integral: need Re w > 0");
    if (r <= 4.0) return psi_series(w);
    // Psi(4 e^{i arg w}) + Gauss panels of K0 along the ray up to w
    cplx dir = w / r;
    cplx acc = psi_series(4.0 * dir);
    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    double t0 = 4.0;
    while (t0 < r) {
        double t1 = std::min(r, t0 + 2.0);
        double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        cplx panel = 0.0;
        for (int i = 0; i < 8; ++i) panel += gw[i] * bessel_k0((mid + half * gx[i]) * dir);
        acc += panel * half * dir;
        t0 = t1;
    }
    return acc;
}

}  // namespace leakyline
