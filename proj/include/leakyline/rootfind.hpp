#ifndef LEAKYLINE_ROOTFIND_HPP
#define LEAKYLINE_ROOTFIND_HPP

#include <cmath>
#include <functional>

#include "leakyline/common.hpp"

namespace leakyline {

/// Bisection on a bracketing interval, then Newton polish with a finite
/// difference derivative. f(lo) and f(hi) must have opposite signs.
/// Bisection runs until the bracket is narrower than bisect_width, Newton
/// until the step is below newton_tol (or a few iterations pass).
inline double bisect_newton(const std::function<double(double)>& f, double lo, double hi,
                            double bisect_width = 1e-8, double newton_tol = 1e-13) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo < 0) == (fhi < 0)) throw numeric_error("bisect_newton: root not bracketed");
    while (hi - lo > bisect_width) {
        double mid = 0.5 * (lo + hi), fm = f(mid);
        if (fm == 0) return mid;
        if ((flo < 0) == (fm < 0)) { lo = mid; flo = fm; } else { hi = mid; fhi = fm; }
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        double fx = f(x);
        double scale = std::max(std::abs(x), 1.0);
        double d = 1e-7 * scale;
        double df = (f(x + d) - f(x - d)) / (2 * d);
        if (df == 0) break;
        double step = fx / df;
        double xn = x - step;
        if (xn < lo || xn > hi) {  // keep the bracket
            xn = 0.5 * (lo + hi);
            double fm = f(xn);
            if ((flo < 0) == (fm < 0)) { lo = xn; flo = fm; } else hi = xn;
        }
        if (std::abs(xn - x) < newton_tol * scale) { x = xn; break; }
        x = xn;
    }
    return x;
}

}  // namespace leakyline

#endif
