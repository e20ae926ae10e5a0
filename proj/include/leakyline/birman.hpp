#ifndef LEAKYLINE_BIRMAN_HPP
#define LEAKYLINE_BIRMAN_HPP

#include <Eigen/Dense>

#include "leakyline/kernels.hpp"
#include "leakyline/quadrature.hpp"

namespace leakyline {

/// Nystrom discretization of the line-restricted kernel at one spectral point.
/// Toeplitz data in mirror-sector form: the even/odd sector operators have
/// entries even[|k-l|] / odd[|k-l|]; the two-line blocks are
/// same = (even+odd)/2, cross = (even-odd)/2. Weights are folded in, so the
/// matrices act on node-value vectors. The same-line log singularity is
/// product-integrated against hat functions, everything else by the midpoint
/// rule with an exact |s|-kink correction on the diagonal. Sector kernels are
/// assembled directly so that the odd sector stays analytic (and complex-step
/// differentiable) across the embedded window.
struct LineDiscretization {
    int n = 0;
    double h = 0;
    SheetedEnergy z;
    std::vector<cplx> even, odd;

    Eigen::MatrixXcd same_matrix() const;
    Eigen::MatrixXcd cross_matrix() const;
    Eigen::MatrixXcd sector_matrix(bool even_sector) const;
};

LineDiscretization discretize_line_kernel(const LineKernelEvaluator& ev, const SheetedEnergy& z,
                                          const QuadratureSpec& quad);

/// Quadrature-discretized Birman-Schwinger operator B(z) on L2+ (+) L2-.
struct KernelMatrix {
    Eigen::MatrixXcd full;  // 2n x 2n, ordered (+ nodes, - nodes)
    SheetedEnergy z;
    double hs_norm = 0;  // Frobenius estimate of the Hilbert-Schmidt norm
    std::vector<double> nodes;
    double h = 0;

    bool is_real(double tol = 1e-12) const;
    Eigen::MatrixXd real_part() const { return full.real(); }
};

struct DiscreteState {
    double z = 0;
    int multiplicity = 1;
    std::vector<double> xs, f_plus, f_minus;  // L2(R^2)-normalized trace samples
    double mu_slope = 0;                      // d mu_min / dz at the crossing
};

struct EmbeddedState {
    double nu = 0;
    int multiplicity = 1;
    std::vector<double> xs, trace;  // + line trace (odd sector), L2(R^2)-normalized
    Eigen::VectorXd u;              // kernel vector of 1 + B_odd
    double norm2d = 0;              // pre-normalization L2(R^2) norm^2
};

class BirmanSchwinger {
public:
    BirmanSchwinger(ModelConfig cfg, QuadratureSpec quad, KernelOptions kopt = {});

    const ModelConfig& config() const { return cfg_; }
    const QuadratureSpec& quad() const { return quad_; }
    const LineKernelEvaluator& kernel() const { return ev_; }
    const TransverseSpectrum& transverse() const { return tv_; }

    KernelMatrix assemble_B(const SheetedEnergy& z) const;

    /// Smallest eigenvalue of 1+B(z) (symmetric factorization for
    /// sign-definite potentials, otherwise smallest real eigenvalue).
    double one_plus_B_min_eig(double z_real) const;

    std::vector<DiscreteState> find_discrete(double z_lo, double z_hi, int grid = 24) const;

    /// Odd-sector embedded eigenvalues of the mirror-symmetric system in
    /// (xi0, mu0). Requires v_plus == v_minus and alpha*a > 1.
    std::vector<EmbeddedState> find_embedded(int grid = 48) const;
    double odd_min_eig(double nu) const;

    /// Probe evidence that 1+B(z) stays positive definite on [z_probe, xi0).
    bool certify_no_spectrum_below(double z_probe, int probes = 8) const;

    LineDiscretization discretize(const SheetedEnergy& z) const {
        return discretize_line_kernel(ev_, z, quad_);
    }

private:
    ModelConfig cfg_;
    QuadratureSpec quad_;
    TransverseSpectrum tv_;
    LineKernelEvaluator ev_;
    std::vector<double> xs_, wplus_half_, wminus_half_, vplus_, vminus_;
    bool sign_definite_ = true;
    double sign_ = -1;  // sign of the definite potential

    Eigen::MatrixXd B_real(double z_real) const;
    Eigen::MatrixXd B_odd(double nu) const;
    friend class ResonanceSolver;
};

}  // namespace leakyline

#endif
