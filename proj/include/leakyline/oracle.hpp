#ifndef LEAKYLINE_ORACLE_HPP
#define LEAKYLINE_ORACLE_HPP

#include <functional>
#include <vector>

#include "leakyline/potentials.hpp"

namespace leakyline {

/// Finite-difference eigenvalue result with a Richardson error estimate.
struct FdResult {
    std::vector<double> eigenvalues;  // extrapolated
    std::vector<double> coarse, fine;
    double errbar = 0;
    double h = 0;  // coarse mesh
};

/// 1D transverse oracle: second differences on (-L2, L2) with Dirichlet ends,
/// point interactions realized as single-row potentials -beta/h at x = +-a
/// (grid aligned: a/h must be an integer). Lowest k eigenvalues by Sturm
/// bisection on the tridiagonal matrix.
std::vector<double> fd_transverse_single(double beta_plus, double beta_minus, double a, double L2,
                                         double h, int k);

/// Richardson over {h, h/2} (the delta row is first-order accurate; in the
/// symmetric aligned layout the observed order is close to two, so the
/// first-order extrapolant is conservative and errbar = |E(h/2) - E(h)|).
FdResult fd_transverse(double beta_plus, double beta_minus, double a, double L2, double h, int k);

struct Fd2dOptions {
    double L1 = 12, L2 = 12;
    double h = 0.125;
    int n_eigs = 3;
    bool halfplane_odd = false;  // Dirichlet at x2 = 0, keep only the +a row
    /// Optional bulk potential added at every grid point.
    std::function<double(double, double)> bulk;
    double eig_ceiling = 0;  // keep eigenvalues below this value (0 = keep all computed)
    int max_lanczos = 140;
};

/// 2D oracle: sparse 5-point Laplacian with line-row potentials
/// (V(+-a) - alpha)/h, Dirichlet box truncation, shift-invert Lanczos.
std::vector<double> fd_2d_single(const ModelConfig& cfg, const Fd2dOptions& opt);

/// Richardson over {h, h/2}.
FdResult fd_2d(const ModelConfig& cfg, const Fd2dOptions& opt);

}  // namespace leakyline

#endif
