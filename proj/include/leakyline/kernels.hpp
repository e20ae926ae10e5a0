#ifndef LEAKYLINE_KERNELS_HPP
#define LEAKYLINE_KERNELS_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "leakyline/sheeted.hpp"
#include "leakyline/transverse.hpp"

namespace leakyline {

struct KernelOptions {
    double tol = 1e-11;   // truncation target for the spectral-cut quadrature
    int refine = 1;       // multiplies panel node counts (convergence checks)
};

/// Precomputed per-z evaluation plan: the channel-subtracted continuum part of
/// a line kernel is a superposition sum_j c_j exp(-s g_j) over the spectral cut.
struct WrapPlan {
    std::vector<cplx> g, c;
    cplx eval(double s) const {
        cplx acc = 0;
        for (size_t i = 0; i < g.size(); ++i) acc += c[i] * std::exp(-s * g[i]);
        return acc;
    }
    /// Values at s = 0, h, 2h, ..., (n-1)h by incremental exponentials.
    std::vector<cplx> eval_grid(double h, int n) const {
        std::vector<cplx> acc(n, cplx(0));
        for (size_t i = 0; i < g.size(); ++i) {
            cplx f = std::exp(-h * g[i]), r = c[i];
            for (int m = 0; m < n; ++m) {
                acc[m] += r;
                r *= f;
            }
        }
        return acc;
    }
};

/// Line-restricted resolvent kernels of the unperturbed two-line operator,
/// built from the Fourier-multiplier form of the Krein resolvent formula.
///
/// In the mirror (even/odd) channels the multiplier is scalar,
///     S_e/o(p,z) = m / (1 - alpha m),  m = (1 +- e^{-2 a kappa_p}) / (2 kappa_p),
/// and the kernel splits into: closed-form free parts (Macdonald functions),
/// the discrete-channel residues at the transverse eigenvalues, and a
/// continuum integral along the spectral cut whose density is z-independent.
/// The second sheet only flips the sign of tau0 in the channel-0 residue.
class LineKernelEvaluator {
public:
    LineKernelEvaluator(double alpha, double a, KernelOptions opt = {});

    double alpha() const { return alpha_; }
    double a() const { return a_; }
    const TransverseSpectrum* spectrum() const { return tv_ ? &*tv_ : nullptr; }

    /// Partial Fourier transform of the free 2D Green kernel between lines at
    /// vertical separation delta: e^{-kappa_p delta} / (2 kappa_p).
    /// Throws when p^2 - z lies on the branch cut (nonpositive reals).
    static cplx free_multiplier(double p, cplx z, double delta);

    /// Gamma_{0,alpha}(p, z) = diag(-1/alpha) + free multiplier matrix.
    Eigen::Matrix2cd gamma0_matrix(double p, cplx z) const;

    /// Exact Fourier symbol of the line-to-line blocks of the resolvent:
    /// r - r M^{-1} r. Throws at transverse-channel poles (det M = 0).
    Eigen::Matrix2cd line_resolvent_multiplier(double p, cplx z) const;

    /// Discrete-channel kernel block of channel j, Eq-(2.7) shape:
    /// (i/2) e^{i tau_j |s|} / tau_j * [phi_j(ia) phi_j(ja)].
    Eigen::Matrix2cd channel_kernel(int j, const SheetedEnergy& z, double s) const;

    /// Scalar even/odd channel kernels (channel 0 lives in the even sector,
    /// channel 1 in the odd sector).
    cplx channel_even(const SheetedEnergy& z, double s) const;
    cplx channel_odd(const SheetedEnergy& z, double s) const;

    /// Full scalar kernels of the even/odd sectors.
    cplx even(const SheetedEnergy& z, double s) const;
    cplx odd(const SheetedEnergy& z, double s) const;

    /// 2x2 line kernel block [[K++, K+-], [K-+, K--]].
    Eigen::Matrix2cd line_kernel(const SheetedEnergy& z, double s) const;

    /// Pieces used by the Nystrom assembly: the same-line block minus its
    /// logarithmic free part (1/2pi) K0(chat |s|), and the cross block.
    cplx same_nonlog(const SheetedEnergy& z, double s) const;
    cplx cross(const SheetedEnergy& z, double s) const;
    /// One-sided slope at s=0+ of the non-log same-line part (exact -alpha/8).
    double same_kink_slope() const { return -alpha_ / 8.0; }

    /// Spectral-cut evaluation plans (reused across s at fixed z).
    WrapPlan wrap_plan(const SheetedEnergy& z, bool even_sector) const;

    /// Cross-check route: direct Fourier inversion of the multiplier along the
    /// real p axis (adaptive panels + analytic rational subtraction). Slower,
    /// independent of the contour machinery. achieved_tol reports the bound.
    Eigen::Matrix2cd line_kernel_direct(cplx z, double s, double tol, double* achieved_tol = nullptr) const;

    /// Boundary value K(lambda + i 0) via the epsilon ladder {1e-3,1e-4,1e-5}
    /// with Richardson extrapolation; converged=false signals an exceptional
    /// point (non-convergence of the ladder).
    Eigen::Matrix2cd boundary_value(double lambda, double s, bool second_sheet, bool from_below,
                                    bool* converged = nullptr) const;

private:
    double alpha_, a_;
    KernelOptions opt_;
    std::optional<TransverseSpectrum> tv_;

    cplx wrap(const SheetedEnergy& z, bool even_sector, double s) const;
    friend struct WrapPlanBuilder;
};

}  // namespace leakyline

#endif
