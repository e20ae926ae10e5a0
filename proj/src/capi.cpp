#include "leakyline.h"

#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "leakyline/birman.hpp"
#include "leakyline/bounds.hpp"
#include "leakyline/config.hpp"
#include "leakyline/oracle.hpp"
#include "leakyline/resonance.hpp"

using namespace leakyline;

namespace {
thread_local std::string g_last_error;

ll_status fail(ll_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename F>
ll_status guarded(F&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        return fail(LL_ERR_INVALID, e.what());
    } catch (const config_error& e) {
        return fail(LL_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(LL_ERR_NUMERIC, e.what());
    }
}
}  // namespace

struct ll_model {
    double alpha = 1, a = 1;
    LinePotential v_plus, v_minus, v_p;
    std::optional<QuadratureSpec> quad;
    // caches from the last searches (trace queries)
    std::vector<DiscreteState> discrete;
    std::vector<EmbeddedState> embedded;

    ModelConfig config() const {
        ModelConfig cfg;
        cfg.alpha = alpha;
        cfg.a = a;
        cfg.v_plus = v_plus;
        cfg.v_minus = v_minus;
        cfg.validate();
        return cfg;
    }
    QuadratureSpec quadrature() const {
        if (quad) return *quad;
        return QuadratureSpec::suggested(config());
    }
};

extern "C" {

const char* ll_last_error(void) { return g_last_error.c_str(); }
const char* ll_version(void) { return "leakyline 1.0.0"; }

ll_model* ll_model_create(double alpha, double a) {
    if (!(alpha > 0) || !(a > 0)) {
        g_last_error = "alpha and a must be positive";
        return nullptr;
    }
    auto* m = new (std::nothrow) ll_model;
    if (m) {
        m->alpha = alpha;
        m->a = a;
    }
    return m;
}

void ll_model_free(ll_model* m) { delete m; }

static ll_status set_pot(ll_model* m, int line, LinePotential p) {
    switch (line) {
        case LL_LINE_PLUS: m->v_plus = std::move(p); break;
        case LL_LINE_MINUS: m->v_minus = std::move(p); break;
        case LL_LINE_BOTH:
            m->v_plus = p;
            m->v_minus = std::move(p);
            break;
        case LL_LINE_PERTURBANT: m->v_p = std::move(p); break;
        default: return fail(LL_ERR_INVALID, "bad line selector");
    }
    m->discrete.clear();
    m->embedded.clear();
    return LL_OK;
}

ll_status ll_set_potential(ll_model* m, int line, const char* profile) {
    if (!m || !profile) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] { return set_pot(m, line, parse_profile(profile)); });
}

ll_status ll_set_potential_tabulated(ll_model* m, int line, const double* xs, const double* vs,
                                     int count) {
    if (!m || !xs || !vs || count < 2) return fail(LL_ERR_INVALID, "bad tabulated arrays");
    return guarded([&] {
        return set_pot(m, line, LinePotential::tabulated({xs, size_t(count)}, {vs, size_t(count)}));
    });
}

ll_status ll_set_quadrature(ll_model* m, double x_max, int n_nodes, int rule) {
    if (!m) return fail(LL_ERR_INVALID, "null model");
    if (!(x_max > 0) || n_nodes < 8) return fail(LL_ERR_INVALID, "bad quadrature parameters");
    QuadratureSpec q;
    q.x_max = x_max;
    q.n_nodes = n_nodes;
    q.rule = rule == 1 ? QuadratureSpec::Rule::gauss_panels : QuadratureSpec::Rule::uniform;
    m->quad = q;
    m->discrete.clear();
    m->embedded.clear();
    return LL_OK;
}

static const LinePotential& pot_of(const ll_model* m, int line) {
    if (line == LL_LINE_MINUS) return m->v_minus;
    if (line == LL_LINE_PERTURBANT) return m->v_p;
    return m->v_plus;
}

ll_status ll_check_vanishing(const ll_model* m, int line, double tol, int* vanishes, double* L) {
    if (!m || !vanishes || !L) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto r = pot_of(m, line).check_vanishing(tol);
        *vanishes = r.vanishes ? 1 : 0;
        *L = r.L;
        return LL_OK;
    });
}

ll_status ll_decay_certificate(const ll_model* m, int line, int* has_certificate, double* C,
                               double* K) {
    if (!m || !has_certificate || !C || !K) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto c = pot_of(m, line).exponential_decay();
        *has_certificate = c.has_value() ? 1 : 0;
        *C = c ? c->C : 0;
        *K = c ? c->K : 0;
        return LL_OK;
    });
}

ll_status ll_potential_eval(const ll_model* m, int line, const double* xs, double* out, int count) {
    if (!m || !xs || !out || count < 0) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        const auto& p = pot_of(m, line);
        for (int i = 0; i < count; ++i) out[i] = p(xs[i]);
        return LL_OK;
    });
}

ll_status ll_transverse(double alpha, double a, ll_transverse_result* out) {
    if (!out) return fail(LL_ERR_INVALID, "null output");
    return guarded([&] {
        auto tv = solve_equal(alpha, a);
        out->xi0 = tv.xi0;
        out->kappa0 = tv.kappa0;
        out->count = tv.count();
        out->xi1 = tv.xi1 ? *tv.xi1 : 0;
        out->kappa1 = tv.kappa1 ? *tv.kappa1 : 0;
        out->mu0 = tv.mu0();
        out->residual0 = tv.secular_residual(tv.kappa0);
        out->residual1 = tv.kappa1 ? tv.secular_residual(*tv.kappa1) : 0;
        out->phi0_at_a = tv.phi0.at_a();
        out->phi1_at_a = tv.phi1 ? tv.phi1->at_a() : 0;
        return LL_OK;
    });
}

ll_status ll_lambda_tilde(const ll_model* m, double v_plus, double v_minus, double* out) {
    if (!m || !out) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto tv = solve_equal(m->alpha, m->a);
        *out = lambda_tilde(v_plus, v_minus, tv);
        return LL_OK;
    });
}

ll_status ll_lambda_field(const ll_model* m, const double* xs, double* out, int count) {
    if (!m || !xs || !out) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto vals = lambda_field(m->config(), {xs, size_t(count)});
        std::memcpy(out, vals.data(), sizeof(double) * vals.size());
        return LL_OK;
    });
}

ll_status ll_kernel_eval(const ll_model* m, double re_z, double im_z, int sheet, double s,
                         double* out_re, double* out_im) {
    if (!m || !out_re || !out_im) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        LineKernelEvaluator ev(m->alpha, m->a);
        SheetedEnergy z(cplx(re_z, im_z), sheet == 1 ? Sheet::second : Sheet::first);
        auto K = ev.line_kernel(z, s);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                out_re[2 * i + j] = K(i, j).real();
                out_im[2 * i + j] = K(i, j).imag();
            }
        return LL_OK;
    });
}

ll_status ll_find_discrete(ll_model* m, double z_lo, double z_hi, double* out_z, int capacity,
                           int* found) {
    if (!m || !out_z || !found) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        BirmanSchwinger bs(m->config(), m->quadrature());
        m->discrete = bs.find_discrete(z_lo, z_hi);
        *found = int(m->discrete.size());
        if (*found > capacity) return fail(LL_ERR_NOSPACE, "output capacity too small");
        for (int i = 0; i < *found; ++i) out_z[i] = m->discrete[size_t(i)].z;
        return LL_OK;
    });
}

ll_status ll_bound_state_trace(ll_model* m, int index, double* xs, double* f_plus, double* f_minus,
                               int capacity, int* n, double* z, int* multiplicity) {
    if (!m || !xs || !f_plus || !f_minus || !n) return fail(LL_ERR_INVALID, "null argument");
    if (index < 0 || index >= int(m->discrete.size()))
        return fail(LL_ERR_INVALID, "no such cached bound state; run ll_find_discrete first");
    const auto& st = m->discrete[size_t(index)];
    if (int(st.xs.size()) > capacity) return fail(LL_ERR_NOSPACE, "output capacity too small");
    *n = int(st.xs.size());
    std::memcpy(xs, st.xs.data(), sizeof(double) * st.xs.size());
    std::memcpy(f_plus, st.f_plus.data(), sizeof(double) * st.f_plus.size());
    std::memcpy(f_minus, st.f_minus.data(), sizeof(double) * st.f_minus.size());
    if (z) *z = st.z;
    if (multiplicity) *multiplicity = st.multiplicity;
    return LL_OK;
}

ll_status ll_find_embedded(ll_model* m, double* out_nu, int capacity, int* found) {
    if (!m || !out_nu || !found) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        BirmanSchwinger bs(m->config(), m->quadrature());
        m->embedded = bs.find_embedded();
        *found = int(m->embedded.size());
        if (*found > capacity) return fail(LL_ERR_NOSPACE, "output capacity too small");
        for (int i = 0; i < *found; ++i) out_nu[i] = m->embedded[size_t(i)].nu;
        return LL_OK;
    });
}

ll_status ll_embedded_trace(ll_model* m, int index, double* xs, double* trace, int capacity,
                            int* n, double* nu, int* multiplicity) {
    if (!m || !xs || !trace || !n) return fail(LL_ERR_INVALID, "null argument");
    if (index < 0 || index >= int(m->embedded.size()))
        return fail(LL_ERR_INVALID, "no such cached embedded state; run ll_find_embedded first");
    const auto& st = m->embedded[size_t(index)];
    if (int(st.xs.size()) > capacity) return fail(LL_ERR_NOSPACE, "output capacity too small");
    *n = int(st.xs.size());
    std::memcpy(xs, st.xs.data(), sizeof(double) * st.xs.size());
    std::memcpy(trace, st.trace.data(), sizeof(double) * st.trace.size());
    if (nu) *nu = st.nu;
    if (multiplicity) *multiplicity = st.multiplicity;
    return LL_OK;
}

ll_status ll_certify_no_spectrum_below(ll_model* m, double z_probe, int* certified) {
    if (!m || !certified) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        BirmanSchwinger bs(m->config(), m->quadrature());
        *certified = bs.certify_no_spectrum_below(z_probe) ? 1 : 0;
        return LL_OK;
    });
}

ll_status ll_resonance_pole(ll_model* m, int embedded_index, double eps,
                            ll_resonance_result* out) {
    if (!m || !out) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        ResonanceSolver rs(m->config(), m->v_p, m->quadrature());
        const auto& st = rs.embedded(embedded_index);
        auto pole = rs.find_pole(st, eps);
        out->nu = pole.nu;
        out->re_z = pole.z.real();
        out->im_z = pole.z.imag();
        out->width = pole.width;
        out->linear_shift = pole.linear_shift;
        out->gamma_r = pole.gamma_r;
        out->gamma_i = pole.gamma_i;
        out->epsilon = pole.epsilon;
        return LL_OK;
    });
}

ll_status ll_perturbative_coefficients(ll_model* m, int embedded_index, double* linear_shift,
                                       double* gamma_r, double* gamma_i) {
    if (!m || !linear_shift || !gamma_r || !gamma_i) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        ResonanceSolver rs(m->config(), m->v_p, m->quadrature());
        auto pc = rs.perturbative_coefficients(rs.embedded(embedded_index));
        *linear_shift = pc.linear_shift;
        *gamma_r = pc.gamma_r;
        *gamma_i = pc.gamma_i;
        return LL_OK;
    });
}

ll_status ll_disc_certificate(const ll_model* m, int n, double* q) {
    if (!m || !q) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        *q = disc_certificate(m->config(), n);
        return LL_OK;
    });
}

ll_status ll_hardy_global(const ll_model* m, double x1_0, double R, double V0, double* c,
                          double* lambda0) {
    if (!m || !c || !lambda0) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto cert = hardy_global(m->config(), x1_0, R, V0);
        *c = cert.c;
        *lambda0 = cert.lambda0;
        return LL_OK;
    });
}

ll_status ll_subcritical_epsilon(const ll_model* m, double x1_0, double R, double V0,
                                 double w_sup_bound, double* eps0) {
    if (!m || !eps0) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        auto cert = hardy_global(m->config(), x1_0, R, V0);
        auto w = [x1_0, w_sup_bound](double x) {
            double d = x - x1_0;
            return -w_sup_bound / (1.0 + d * d);
        };
        *eps0 = subcritical_epsilon(w, w_sup_bound, cert);
        return LL_OK;
    });
}

ll_status ll_weyl_residual(const ll_model* m, int n, double k, double* bound) {
    if (!m || !bound) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        *bound = weyl_residual(m->config(), n, k);
        return LL_OK;
    });
}

ll_status ll_fd_transverse(double beta_plus, double beta_minus, double a, double L2, double h,
                           double* out, int capacity, int* found, double* errbar) {
    if (!out || !found) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        int k = std::min(capacity, 2);
        auto res = fd_transverse(beta_plus, beta_minus, a, L2, h, k);
        *found = int(res.eigenvalues.size());
        for (int i = 0; i < *found; ++i) out[i] = res.eigenvalues[size_t(i)];
        if (errbar) *errbar = res.errbar;
        return LL_OK;
    });
}

ll_status ll_fd2d(const ll_model* m, double L1, double L2, double h, int n_eigs,
                  int halfplane_odd, double eig_ceiling, double* out, int capacity, int* found,
                  double* errbar) {
    if (!m || !out || !found) return fail(LL_ERR_INVALID, "null argument");
    return guarded([&] {
        Fd2dOptions opt;
        opt.L1 = L1;
        opt.L2 = L2;
        opt.h = h;
        opt.n_eigs = n_eigs;
        opt.halfplane_odd = halfplane_odd != 0;
        opt.eig_ceiling = eig_ceiling;
        auto res = fd_2d(m->config(), opt);
        *found = int(res.eigenvalues.size());
        if (*found > capacity) *found = capacity;
        for (int i = 0; i < *found; ++i) out[i] = res.eigenvalues[size_t(i)];
        if (errbar) *errbar = res.errbar;
        return LL_OK;
    });
}

}  // extern "C"
