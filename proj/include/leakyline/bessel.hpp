#ifndef LEAKYLINE_BESSEL_HPP
#define LEAKYLINE_BESSEL_HPP

#include "leakyline/common.hpp"

namespace leakyline {

/// Macdonald function K0(u) for complex u with Re u > 0.
/// Small |u|: power series against I0; large |u|: asymptotic expansion;
/// in between: trapezoid evaluation of int_0^inf exp(-u cosh t) dt, which
/// converges geometrically because all odd derivatives vanish at t = 0.
cplx bessel_k0(cplx u);

/// Macdonald function K1(u) for complex u with Re u > 0.
cplx bessel_k1(cplx u);

/// Running integral Psi(w) = int_0^w K0(t) dt along the ray arg t = arg w,
/// Re w > 0. Psi(w) -> pi/2 as |w| -> inf along such rays.
cplx bessel_k0_integral(cplx w);

/// int_0^w t K0(t) dt = 1 - w K1(w) (closed form).
inline cplx bessel_k0_first_moment(cplx w) {
    if (w == cplx(0.0)) return 0.0;
    return 1.0 - w * bessel_k1(w);
}

}  // namespace leakyline

#endif
