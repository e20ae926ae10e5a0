#ifndef LEAKYLINE_RESONANCE_HPP
#define LEAKYLINE_RESONANCE_HPP

#include "leakyline/birman.hpp"

namespace leakyline {

struct ResonancePole {
    double nu = 0;            // unperturbed embedded eigenvalue
    cplx z{};                 // pole location, Im z <= 0
    double linear_shift = 0;  // (omega, V_p omega)_{L2+}
    double gamma_r = 0, gamma_i = 0;
    double width = 0;  // -2 Im z
    double epsilon = 0;
    int newton_iterations = 0;
};

struct PerturbativeCoefficients {
    double linear_shift = 0;
    double gamma_r = 0, gamma_i = 0;
    bool ladder_converged = true;
};

struct WidthFit {
    std::vector<ResonancePole> poles;
    double exponent = 0;      // slope of log width vs log eps
    double shift_ratio = 0;   // (Re z - nu)/(eps*shift) at the smallest eps
    double fgr_ratio = 0;     // width / (2 eps^2 |Gamma_i|) at the reference eps
};

/// Resonances of the mirror-symmetric system V+ = V- = V0 perturbed by
/// V+ -> V0 + eps V_p: second sheet poles of the resolvent near the embedded
/// eigenvalues, located through the scalar implicit function
///   eta(z) = z - nu - (omega, Ve^{1/2} G(z)^{-1} |Ve|^{1/2} omega),
///   G(z) = 1 + |Ve|^{1/2} A^II(z) Ve^{1/2},
///   A^II(z) = R^II_{V0,++}(z) - P/(nu - z),
/// whose zero coincides with Ker Gamma^II(z) != 0.
class ResonanceSolver {
public:
    ResonanceSolver(ModelConfig mirror_cfg, LinePotential v_p, QuadratureSpec quad,
                    KernelOptions kopt = {});

    const BirmanSchwinger& birman() const { return bs_; }
    const EmbeddedState& embedded(int which = 0) const;

    /// Sheet choice representing the analytic continuation through the window.
    static SheetedEnergy continued(cplx z) {
        return SheetedEnergy(z, z.imag() > 0 ? Sheet::first : Sheet::second);
    }

    /// Mirror-corrected (+,+) resolvent block on the quadrature nodes
    /// (Krein correction in the even/odd sector decomposition).
    Eigen::MatrixXcd mirror_resolvent_pp(const SheetedEnergy& z) const;

    /// Gamma^II(z) = 1 + |V_eps|^{1/2} R^II_{V0,++}(z) V_eps^{1/2}.
    Eigen::MatrixXcd gamma_II(const SheetedEnergy& z, double eps) const;

    /// Rank-one spectral projector of the discretized mirror resolvent at nu
    /// by contour integration (trapezoid circle, radius 1e-3 |mu0 - xi0|).
    Eigen::MatrixXcd spectral_projector(const EmbeddedState& st) const;

    PerturbativeCoefficients perturbative_coefficients(const EmbeddedState& st) const;

    ResonancePole find_pole(const EmbeddedState& st, double eps) const;

    WidthFit width_scaling(const EmbeddedState& st, const std::vector<double>& eps_grid,
                           double noise_floor = 1e-10) const;

    /// Continuation-strip margin: certified decay C of the potentials, or +inf
    /// for compactly supported profiles (strip condition Im tau0^II > -C/2).
    double strip_bound() const { return strip_; }

private:
    ModelConfig cfg_;
    LinePotential v_p_;
    QuadratureSpec quad_;
    KernelOptions kopt_;
    BirmanSchwinger bs_;
    std::vector<double> vp_samples_;
    double strip_ = 0;
    mutable std::vector<EmbeddedState> embedded_;

    cplx eta(const EmbeddedState& st, const Eigen::MatrixXcd& P, double eps, cplx z) const;
    void check_strip(cplx z) const;
};

}  // namespace leakyline

#endif
