#ifndef LEAKYLINE_SHEETED_HPP
#define LEAKYLINE_SHEETED_HPP

#include "leakyline/common.hpp"

namespace leakyline {

enum class Sheet { first, second };

/// Complex spectral parameter plus the branch flag of the channel-0 square
/// root tau0(z) = sqrt(z - xi0). The first sheet has Im tau0 > 0; the second
/// sheet flips the sign (Im tau0 <= 0). Channel 1 and the continuum always
/// use the first-sheet branch.
struct SheetedEnergy {
    cplx z{};
    Sheet sheet0 = Sheet::first;

    SheetedEnergy() = default;
    SheetedEnergy(cplx zz, Sheet s = Sheet::first) : z(zz), sheet0(s) {}

    /// Square root with Im >= 0; real positive arguments take the limit
    /// from the upper half plane (+sqrt).
    static cplx sqrt_up(cplx w) {
        if (w.imag() == 0.0 && w.real() >= 0.0) return std::sqrt(w.real());
        return cplx(0, 1) * std::sqrt(-w);
    }

    /// tau_j(z) = sqrt(z - xi_j); the sheet flag applies to channel 0 only.
    cplx tau(double xi_j, bool channel0) const {
        cplx t = sqrt_up(z - xi_j);
        if (channel0 && sheet0 == Sheet::second) return -t;
        return t;
    }

    /// Continuum branch tau(p, z) = sqrt(z - p^2), Im > 0.
    cplx tau_continuum(double p) const { return sqrt_up(z - p * p); }

    /// kappa_p = sqrt(p^2 - z), principal branch (Re >= 0); equals -i tau(p,z).
    cplx kappa(double p) const { return -cplx(0, 1) * tau_continuum(p); }

    /// chat = sqrt(-z), Re > 0 for z off [0, inf).
    cplx chat() const { return std::sqrt(-z); }

    SheetedEnergy with(cplx zz) const { return SheetedEnergy(zz, sheet0); }
};

}  // namespace leakyline

#endif
