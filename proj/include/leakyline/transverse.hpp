#ifndef LEAKYLINE_TRANSVERSE_HPP
#define LEAKYLINE_TRANSVERSE_HPP

#include <optional>
#include <span>
#include <vector>

#include "leakyline/potentials.hpp"

namespace leakyline {

/// Piecewise exponential eigenfunction of the two point interaction problem,
/// L2 normalized. Even branch: c*cosh(kappa x) inside, d*e^{-kappa(|x|-a)}
/// outside. Odd branch: c*sinh(kappa x) inside, sgn(x)*d*e^{-kappa(|x|-a)}.
struct TransverseEigenfunction {
    double kappa = 0;
    double a = 0;
    bool even = true;
    double inner = 0;  // coefficient of cosh/sinh
    double outer = 0;  // coefficient of the decaying exponential, at |x| = a

    double operator()(double x) const;
    double derivative(double x) const;  // one-sided away from +-a
    double at_a() const { return outer; }
    double norm_sq() const;  // closed form, should be 1 after normalization
    double grad_norm_sq() const;  // int |phi'|^2, closed form
};

/// Spectral data of the transverse operator with equal strengths alpha at +-a.
struct TransverseSpectrum {
    double alpha = 0, a = 0;
    double kappa0 = 0, xi0 = 0;
    std::optional<double> kappa1, xi1;  // present iff alpha*a > 1
    TransverseEigenfunction phi0;
    std::optional<TransverseEigenfunction> phi1;

    int count() const { return xi1 ? 2 : 1; }
    /// Dirichlet half line threshold of Eq. (4.2): xi1 when alpha*a>1, else 0.
    double mu0() const { return xi1 ? *xi1 : 0.0; }
    /// Secular residual |(alpha^2/4)e^{-4 kappa a} - (kappa - alpha/2)^2|.
    double secular_residual(double kappa) const;
};

/// Solve the equal-strength two-point problem (ground state, and the odd
/// excited state when alpha*a > 1). Roots of the secular equation by
/// bracketed bisection plus Newton polish.
TransverseSpectrum solve_equal(double alpha, double a);

/// One bound state of the generalized unequal-strength problem.
struct GeneralBoundState {
    double kappa = 0;
    double energy = 0;  // -kappa^2
    // matching coefficients: psi = A e^{kappa(x+a)} (x<-a),
    // B e^{kappa x} + C e^{-kappa x} (|x|<a), D e^{-kappa(x-a)} (x>a)
    double A = 0, B = 0, C = 0, D = 0;
};

/// All bound states of the operator with point interactions of attractive
/// strengths beta_plus at +a and beta_minus at -a, i.e. all kappa > 0 with
/// (2k - b+)(2k - b-) = b+ b- e^{-4ka} admitting an L2 matching solution.
/// Sorted by decreasing kappa; empty when no bound state exists.
std::vector<GeneralBoundState> solve_general(double beta_plus, double beta_minus, double a);

/// lambda~(v+, v-): lowest spectral point of the transverse operator with
/// strengths v+- - alpha, minus xi0.
double lambda_tilde(double v_plus, double v_minus, const ModelConfig& cfg);
double lambda_tilde(double v_plus, double v_minus, const TransverseSpectrum& tv);

/// lambda(x1) = lambda~(V+(x1), V-(x1)) on the given nodes.
std::vector<double> lambda_field(const ModelConfig& cfg, std::span<const double> nodes);

struct DirichletHalfline {
    double mu0 = 0;
    std::optional<double> xi1;
};

/// Spectral data of the Dirichlet half-line comparison operator.
DirichletHalfline dirichlet_halfline(double alpha, double a);

}  // namespace leakyline

#endif
