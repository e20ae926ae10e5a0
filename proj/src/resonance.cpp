#include "leakyline/resonance.hpp"

#include <Eigen/LU>
#include <cmath>

namespace leakyline {

namespace {
constexpr cplx I_unit{0.0, 1.0};
}

ResonanceSolver::ResonanceSolver(ModelConfig mirror_cfg, LinePotential v_p, QuadratureSpec quad,
                                 KernelOptions kopt)
    : cfg_(std::move(mirror_cfg)),
      v_p_(std::move(v_p)),
      quad_(quad),
      kopt_(kopt),
      bs_(cfg_, quad, kopt) {
    if (!cfg_.mirror_symmetric())
        throw std::invalid_argument("ResonanceSolver: config must be mirror symmetric (V+ == V-)");
    if (quad_.rule != QuadratureSpec::Rule::uniform)
        throw std::invalid_argument("ResonanceSolver: uniform quadrature rule required");
    vp_samples_ = v_p_.sample(quad_.nodes());
    auto c0 = cfg_.v_plus.exponential_decay();
    auto cp = v_p_.exponential_decay();
    if (cfg_.v_plus.compactly_supported() && v_p_.compactly_supported())
        strip_ = std::numeric_limits<double>::infinity();  // any decay constant works
    else if (c0 && cp)
        strip_ = 0.5 * std::min(c0->C, cp->C);  // conservative certified strip
    else
        strip_ = 0.0;  // no certificate; callers stay on/above the axis
}

const EmbeddedState& ResonanceSolver::embedded(int which) const {
    if (embedded_.empty()) embedded_ = bs_.find_embedded();
    if (which < 0 || which >= int(embedded_.size()))
        throw numeric_error("ResonanceSolver: requested embedded eigenvalue not found");
    return embedded_[size_t(which)];
}

void ResonanceSolver::check_strip(cplx z) const {
    if (!std::isfinite(strip_)) return;
    const auto& tv = bs_.transverse();
    cplx tau2 = continued(z).tau(tv.xi0, true);
    if (tau2.imag() < -strip_)
        throw numeric_error("resonance: z outside the certified continuation strip");
}

Eigen::MatrixXcd ResonanceSolver::mirror_resolvent_pp(const SheetedEnergy& z) const {
    LineDiscretization d = bs_.discretize(z);
    const int n = d.n;
    const auto& v = bs_.vplus_;
    Eigen::VectorXd vh(n), vah(n);
    for (int k = 0; k < n; ++k) {
        vh[k] = signed_sqrt(v[k]);
        vah[k] = std::sqrt(std::abs(v[k]));
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    for (int pass = 0; pass < 2; ++pass) {
        bool even = pass == 0;
        Eigen::MatrixXcd T = d.sector_matrix(even);
        Eigen::MatrixXcd B = vah.asDiagonal() * T * vh.asDiagonal();
        B += Eigen::MatrixXcd::Identity(n, n);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(B);
        Eigen::MatrixXcd corr = T * vh.asDiagonal() * lu.solve(vah.asDiagonal() * T);
        out += 0.5 * (T - corr);
    }
    return out;
}

Eigen::MatrixXcd ResonanceSolver::gamma_II(const SheetedEnergy& z, double eps) const {
    check_strip(z.z);
    const int n = quad_.n_nodes;
    Eigen::MatrixXcd R = mirror_resolvent_pp(z);
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(n, n);
    if (eps == 0) return G;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            G(k, l) += std::sqrt(eps * std::abs(vp_samples_[k])) * R(k, l) *
                       std::sqrt(eps) * signed_sqrt(vp_samples_[l]);
    return G;
}

Eigen::MatrixXcd ResonanceSolver::spectral_projector(const EmbeddedState& st) const {
    const auto& tv = bs_.transverse();
    double radius = 1e-3 * std::abs(tv.mu0() - tv.xi0);
    const int M = 16;
    const int n = quad_.n_nodes;
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < M; ++j) {
        double th = 2 * pi * (j + 0.5) / M;
        cplx w = radius * std::exp(I_unit * th);
        Eigen::MatrixXcd R = mirror_resolvent_pp(continued(st.nu + w));
        P += R * w;
    }
    // -(1/2pi i) oint R dz: the residue of P/(nu - z) at nu is -P
    return -P / double(M);
}

cplx ResonanceSolver::eta(const EmbeddedState& st, const Eigen::MatrixXcd& P, double eps,
                          cplx z) const {
    const int n = quad_.n_nodes;
    const double h = quad_.spacing();
    SheetedEnergy ze = continued(z);
    Eigen::MatrixXcd A = mirror_resolvent_pp(ze);
    cplx pole_factor = 1.0 / (st.nu - z);
    A -= pole_factor * P;
    Eigen::VectorXcd omega = Eigen::VectorXcd::Zero(n);
    for (int k = 0; k < n; ++k) omega[k] = st.trace[k];
    Eigen::VectorXcd rhs(n), lhsv(n);
    for (int k = 0; k < n; ++k) {
        double vp = vp_samples_[k];
        rhs[k] = std::sqrt(eps) * signed_sqrt(vp) * omega[k];
        lhsv[k] = std::sqrt(eps * std::abs(vp)) * omega[k];
    }
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            G(k, l) += std::sqrt(eps * std::abs(vp_samples_[k])) * A(k, l) * std::sqrt(eps) *
                       signed_sqrt(vp_samples_[l]);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(G);
    Eigen::VectorXcd gi = lu.solve(lhsv);
    cplx inner = h * rhs.dot(gi);  // conjugates the first argument; omega real
    return z - st.nu - inner;
}

PerturbativeCoefficients ResonanceSolver::perturbative_coefficients(const EmbeddedState& st) const {
    const int n = quad_.n_nodes;
    const double h = quad_.spacing();
    PerturbativeCoefficients out;
    double shift = 0;
    for (int k = 0; k < n; ++k) shift += vp_samples_[k] * st.trace[k] * st.trace[k];
    shift *= h;
    out.linear_shift = shift;

    Eigen::MatrixXcd P = spectral_projector(st);
    Eigen::VectorXcd w(n);
    for (int k = 0; k < n; ++k) w[k] = vp_samples_[k] * st.trace[k];

    // A^II(nu - i delta) ladder, Richardson-extrapolated toward the real axis
    const double deltas[3] = {1e-3, 1e-4, 1e-5};
    cplx vals[3];
    for (int i = 0; i < 3; ++i) {
        cplx z = cplx(st.nu, -deltas[i]);
        SheetedEnergy ze = continued(z);
        Eigen::MatrixXcd A = mirror_resolvent_pp(ze);
        A -= (1.0 / (st.nu - z)) * P;
        // A carries one quadrature weight per application, so the L2+ sandwich
        // (omega, V_p A V_p omega) takes a single extra factor h
        cplx q = 0;
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) q += w[k] * A(k, l) * w[l];
        vals[i] = -h * q;
    }
    cplx f01 = (10.0 * vals[1] - vals[0]) / 9.0;
    cplx f12 = (10.0 * vals[2] - vals[1]) / 9.0;
    cplx ex = (100.0 * f12 - f01) / 99.0;
    out.ladder_converged = std::abs(f12 - f01) < 1e-3 * std::max(1e-30, std::abs(ex));
    out.gamma_r = ex.real();
    out.gamma_i = ex.imag();
    return out;
}

ResonancePole ResonanceSolver::find_pole(const EmbeddedState& st, double eps) const {
    if (!(eps > 0)) throw std::invalid_argument("find_pole: eps must be positive");
    PerturbativeCoefficients pc = perturbative_coefficients(st);
    Eigen::MatrixXcd P = spectral_projector(st);

    cplx z = st.nu + eps * pc.linear_shift + eps * eps * cplx(pc.gamma_r, pc.gamma_i);
    double scale = std::max({std::abs(eps * pc.linear_shift), eps * eps * std::abs(pc.gamma_i),
                             1e-9});
    ResonancePole pole;
    pole.nu = st.nu;
    pole.epsilon = eps;
    pole.linear_shift = pc.linear_shift;
    pole.gamma_r = pc.gamma_r;
    pole.gamma_i = pc.gamma_i;

    cplx fz = eta(st, P, eps, z);
    int it = 0;
    for (; it < 30; ++it) {
        double step = 1e-7 * std::max(scale, std::abs(z - st.nu));
        cplx d = (eta(st, P, eps, z + step) - eta(st, P, eps, z - step)) / (2.0 * step);
        if (std::abs(d) < 1e-300) break;
        cplx dz = fz / d;
        cplx zn = z - dz;
        if (zn.imag() > 0) zn = cplx(zn.real(), -0.25 * std::abs(zn.imag()));  // stay on/below axis
        cplx fn = eta(st, P, eps, zn);
        // Muller-style fallback: damp while the residual grows
        int halvings = 0;
        while (std::abs(fn) > 2.0 * std::abs(fz) && halvings < 8) {
            zn = 0.5 * (z + zn);
            fn = eta(st, P, eps, zn);
            ++halvings;
        }
        double move = std::abs(zn - z);
        z = zn;
        fz = fn;
        if (move < 1e-13 * std::max(1.0, std::abs(z)) || std::abs(fz) < 1e-14 * scale) break;
    }
    pole.newton_iterations = it + 1;
    if (!(std::abs(fz) < 1e-6 * std::max(scale, 1e-12)))
        throw numeric_error("find_pole: Newton iteration did not converge");
    if (z.imag() > 0) z = cplx(z.real(), 0.0);
    pole.z = z;
    pole.width = -2.0 * z.imag();
    return pole;
}

WidthFit ResonanceSolver::width_scaling(const EmbeddedState& st, const std::vector<double>& eps_grid,
                                        double noise_floor) const {
    WidthFit fit;
    for (double e : eps_grid) fit.poles.push_back(find_pole(st, e));
    // least squares on log width vs log eps, excluding noise-floor widths
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& p : fit.poles) {
        if (p.width <= noise_floor) continue;
        double lx = std::log(p.epsilon), ly = std::log(p.width);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
    }
    if (m >= 2) fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const auto& first = fit.poles.front();
    fit.shift_ratio = (first.z.real() - first.nu) / (first.epsilon * first.linear_shift);
    // FGR cross-check at the reference epsilon (closest to 1e-2)
    const ResonancePole* ref = &first;
    for (const auto& p : fit.poles)
        if (std::abs(std::log10(p.epsilon) + 2.0) < std::abs(std::log10(ref->epsilon) + 2.0)) ref = &p;
    double fgr = 2.0 * ref->epsilon * ref->epsilon * std::abs(ref->gamma_i);
    fit.fgr_ratio = fgr > 0 ? ref->width / fgr : 0.0;
    return fit;
}

}  // namespace leakyline
