/* leakyline C API: spectral analysis of a two-dimensional Schrodinger
 * operator with an attractive singular interaction on two parallel lines
 * x2 = +-a, perturbed by bounded line potentials.
 *
 * Opaque-handle interface over the C++ core. All functions return
 * LL_OK (0) on success; on failure they return an error code and leave a
 * message retrievable through ll_last_error() (thread local). */
#ifndef LEAKYLINE_H
#define LEAKYLINE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ll_model ll_model; /* opaque */

typedef enum {
    LL_OK = 0,
    LL_ERR_INVALID = 1, /* bad arguments / configuration */
    LL_ERR_NUMERIC = 2, /* numerical failure (diagnostic in ll_last_error) */
    LL_ERR_NOSPACE = 3  /* output buffer too small */
} ll_status;

/* line selectors for potential setters */
#define LL_LINE_PLUS 1
#define LL_LINE_MINUS (-1)
#define LL_LINE_BOTH 0     /* mirror-symmetric V0 on both lines */
#define LL_LINE_PERTURBANT 2

const char* ll_last_error(void);
const char* ll_version(void);

/* ---- model setup -------------------------------------------------- */

/* coupling alpha > 0, half line distance a > 0 */
ll_model* ll_model_create(double alpha, double a);
void ll_model_free(ll_model* m);

/* profile expression, e.g. "box(-0.3, 0, 2)", "gaussian(-1, 0, 1)",
 * "constant(0.5)", "0.5 * box(...) + gaussian(...)", "zero",
 * "tabulated(path.csv)" (two-column CSV x,V with uniform increasing x) */
ll_status ll_set_potential(ll_model* m, int line, const char* profile);
ll_status ll_set_potential_tabulated(ll_model* m, int line, const double* xs, const double* vs,
                                     int count);

/* quadrature layout for the integral-operator discretizations;
 * rule: 0 = uniform midpoint cells (default), 1 = gauss panels */
ll_status ll_set_quadrature(ll_model* m, double x_max, int n_nodes, int rule);

/* ---- potentials --------------------------------------------------- */

ll_status ll_check_vanishing(const ll_model* m, int line, double tol, int* vanishes, double* L);
ll_status ll_decay_certificate(const ll_model* m, int line, int* has_certificate, double* C,
                               double* K);
ll_status ll_potential_eval(const ll_model* m, int line, const double* xs, double* out, int count);

/* ---- transverse spectrum ------------------------------------------ */

typedef struct {
    double xi0, kappa0;
    double xi1, kappa1; /* meaningful iff count == 2 */
    int count;
    double mu0;                     /* xi1 when alpha*a > 1, else 0 */
    double residual0, residual1;    /* secular equation residuals */
    double phi0_at_a, phi1_at_a;    /* normalized eigenfunction traces */
} ll_transverse_result;

ll_status ll_transverse(double alpha, double a, ll_transverse_result* out);

/* lowest spectral point of the transverse operator with strengths
 * v+- - alpha, minus xi0 */
ll_status ll_lambda_tilde(const ll_model* m, double v_plus, double v_minus, double* out);
ll_status ll_lambda_field(const ll_model* m, const double* xs, double* out, int count);

/* ---- line-restricted resolvent kernels ----------------------------- */

/* 2x2 block [[K++, K+-], [K-+, K--]] at separation s; sheet: 0 first,
 * 1 second (channel-0 branch flipped). Row-major out arrays of length 4. */
ll_status ll_kernel_eval(const ll_model* m, double re_z, double im_z, int sheet, double s,
                         double* out_re, double* out_im);

/* ---- discrete and embedded eigenvalues ----------------------------- */

ll_status ll_find_discrete(ll_model* m, double z_lo, double z_hi, double* out_z, int capacity,
                           int* found);

/* trace samples of the bound state nearest to z (from the last search);
 * arrays of length >= n_nodes; n receives the sample count */
ll_status ll_bound_state_trace(ll_model* m, int index, double* xs, double* f_plus, double* f_minus,
                               int capacity, int* n, double* z, int* multiplicity);

ll_status ll_find_embedded(ll_model* m, double* out_nu, int capacity, int* found);
ll_status ll_embedded_trace(ll_model* m, int index, double* xs, double* trace, int capacity,
                            int* n, double* nu, int* multiplicity);

/* probe evidence that 1 + B(z) stays positive down to z_probe (V >= 0) */
ll_status ll_certify_no_spectrum_below(ll_model* m, double z_probe, int* certified);

/* ---- resonances ----------------------------------------------------- */

typedef struct {
    double nu;                /* unperturbed embedded eigenvalue */
    double re_z, im_z;        /* second-sheet pole */
    double width;             /* -2 Im z */
    double linear_shift;      /* (omega, V_p omega)_{L2+} */
    double gamma_r, gamma_i;  /* eps^2 coefficients */
    double epsilon;
} ll_resonance_result;

/* mirror model (LL_LINE_BOTH potential) perturbed by eps * V_p on the
 * plus line; embedded_index selects the unperturbed eigenvalue */
ll_status ll_resonance_pole(ll_model* m, int embedded_index, double eps,
                            ll_resonance_result* out);
ll_status ll_perturbative_coefficients(ll_model* m, int embedded_index, double* linear_shift,
                                       double* gamma_r, double* gamma_i);

/* ---- variational and Hardy certificates ----------------------------- */

ll_status ll_disc_certificate(const ll_model* m, int n, double* q);
ll_status ll_hardy_global(const ll_model* m, double x1_0, double R, double V0, double* c,
                          double* lambda0);
/* eps0 for W = -rho/2 style weights: pass sup |w|(1+(x1-x1_0)^2) */
ll_status ll_subcritical_epsilon(const ll_model* m, double x1_0, double R, double V0,
                                 double w_sup_bound, double* eps0);
ll_status ll_weyl_residual(const ll_model* m, int n, double k, double* bound);

/* ---- finite-difference oracles -------------------------------------- */

/* 1D: strengths beta+- at x = +-a, Richardson over {h, h/2} */
ll_status ll_fd_transverse(double beta_plus, double beta_minus, double a, double L2, double h,
                           double* out, int capacity, int* found, double* errbar);

/* 2D: sparse 5-point Laplacian with line rows; halfplane_odd = 1 solves the
 * Dirichlet half plane (odd sector); Richardson over {h, h/2} */
ll_status ll_fd2d(const ll_model* m, double L1, double L2, double h, int n_eigs,
                  int halfplane_odd, double eig_ceiling, double* out, int capacity, int* found,
                  double* errbar);

#ifdef __cplusplus
}
#endif

#endif /* LEAKYLINE_H */
