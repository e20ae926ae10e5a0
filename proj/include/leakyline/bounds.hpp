#ifndef LEAKYLINE_BOUNDS_HPP
#define LEAKYLINE_BOUNDS_HPP

#include <functional>
#include <vector>

#include "leakyline/potentials.hpp"
#include "leakyline/transverse.hpp"

namespace leakyline {

/// A longitudinal test function with analytic derivative, supported in
/// [x_lo, x_hi] (numerically negligible outside).
struct LineFunction {
    std::function<double(double)> f, df;
    double x_lo = -10, x_hi = 10;
};

/// Transverse factor choice for separated test functions f(x1) phi(x2).
struct TransverseFactor {
    std::function<double(double)> phi, dphi;
    double norm_sq = 1;       // ||phi||^2
    double grad_sq = 0;       // ||phi'||^2
    double at_plus_a = 0, at_minus_a = 0;
    static TransverseFactor from_eigenfunction(const TransverseEigenfunction& ef);
    static TransverseFactor gaussian(double width, double a);
};

struct HardyCertificate {
    enum class Kind { local, global } kind = Kind::local;
    // local: lambda(x1) samples
    std::vector<double> grid, lambda_samples;
    // global: constant c for rho(x) = 1/(1 + (x1 - x1_0)^2)
    double c = 0, lambda0 = 0, x1_0 = 0, R = 0, V0 = 0;
};

/// Q[psi_n] for the trapezoid test function (plateau n, ramp n..2n):
/// Q = int |phi_n'|^2 + |phi0(a)|^2 int (V+ + V-) |phi_n|^2 (closed form +
/// quadrature). Negative values certify spectrum below xi0.
double disc_certificate(const ModelConfig& cfg, int n);

/// Both sides of the lower-bound form inequality for psi = f (x) phi:
/// returns (E[psi] - xi0 ||psi||^2) - (||d1 psi||^2 + int lambda |psi|^2),
/// which must be >= -tolerance.
double lower_bound_gap(const ModelConfig& cfg, const LineFunction& f, const TransverseFactor& phi);

/// E[psi] - xi0 ||psi||^2 for separated psi (used by certificates and tests).
double form_gap(const ModelConfig& cfg, const LineFunction& f, const TransverseFactor& phi);

/// int rho |psi|^2 for rho(x) = 1/(1+(x1-x1_0)^2), separated psi.
double rho_weight(const LineFunction& f, const TransverseFactor& phi, double x1_0);

HardyCertificate hardy_local(const ModelConfig& cfg, std::span<const double> grid);
HardyCertificate hardy_global(const ModelConfig& cfg, double x1_0, double R, double V0);

/// Largest eps with eps*|w| <= c*rho pointwise, for |w(x)| <= C_w/x1^2
/// bounded; +infinity when w >= 0.
double subcritical_epsilon(const std::function<double(double)>& w, double w_sup_bound,
                           const HardyCertificate& global_cert);

/// Explicit Weyl-sequence residual bound at scale n and momentum k:
/// n^{-2} ||phi..|| + 2|k| n^{-1} ||phi.|| + sum_pm sup_{supp phi_n} |V_pm|,
/// with the fixed C-infinity bump phi and supp phi_n = (n^2 - n, n^2 + n).
double weyl_residual(const ModelConfig& cfg, int n, double k);

}  // namespace leakyline

#endif
