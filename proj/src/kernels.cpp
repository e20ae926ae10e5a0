#include "leakyline/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "leakyline/bessel.hpp"
#include "leakyline/quadrature.hpp"

namespace leakyline {

namespace {

constexpr cplx I_unit{0.0, 1.0};

// scalar channel multiplier ingredients: m(kappa) = (1 +- e^{-2 a kappa})/(2 kappa)
inline cplx m_chan(cplx kappa, double a, bool even_sector) {
    cplx e = std::exp(-2.0 * a * kappa);
    return (even_sector ? (1.0 + e) : (1.0 - e)) / (2.0 * kappa);
}

// correction multiplier C = alpha m^2 / (1 - alpha m)
inline cplx corr(cplx kappa, double a, double alpha, bool even_sector) {
    cplx m = m_chan(kappa, a, even_sector);
    return alpha * m * m / (1.0 - alpha * m);
}

}  // namespace

LineKernelEvaluator::LineKernelEvaluator(double alpha, double a, KernelOptions opt)
    : alpha_(alpha), a_(a), opt_(opt) {
    if (!(a > 0)) throw std::invalid_argument("LineKernelEvaluator: a must be positive");
    if (alpha < 0) throw std::invalid_argument("LineKernelEvaluator: alpha must be >= 0");
    if (alpha > 0) tv_ = solve_equal(alpha, a);
}

cplx LineKernelEvaluator::free_multiplier(double p, cplx z, double delta) {
    cplx w = p * p - z;
    if (w.imag() == 0.0 && w.real() <= 0.0)
        throw numeric_error("free_multiplier: p^2 - z on the branch cut");
    cplx kappa = std::sqrt(w);
    return std::exp(-kappa * delta) / (2.0 * kappa);
}

Eigen::Matrix2cd LineKernelEvaluator::gamma0_matrix(double p, cplx z) const {
    if (!(alpha_ > 0)) throw numeric_error("gamma0_matrix: needs alpha > 0");
    cplx m0 = free_multiplier(p, z, 0.0);
    cplx m1 = free_multiplier(p, z, 2.0 * a_);
    Eigen::Matrix2cd M;
    M << m0 - 1.0 / alpha_, m1, m1, m0 - 1.0 / alpha_;
    return M;
}

Eigen::Matrix2cd LineKernelEvaluator::line_resolvent_multiplier(double p, cplx z) const {
    cplx m0 = free_multiplier(p, z, 0.0);
    cplx m1 = free_multiplier(p, z, 2.0 * a_);
    Eigen::Matrix2cd r;
    r << m0, m1, m1, m0;
    if (!(alpha_ > 0)) return r;  // no interaction
    Eigen::Matrix2cd M = gamma0_matrix(p, z);
    cplx det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    if (std::abs(det) < 1e-300) throw numeric_error("line_resolvent_multiplier: singular Gamma matrix");
    return r - r * M.inverse() * r;
}

Eigen::Matrix2cd LineKernelEvaluator::channel_kernel(int j, const SheetedEnergy& z, double s) const {
    if (!tv_) throw numeric_error("channel_kernel: no transverse spectrum (alpha = 0)");
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    if (j == 0) {
        cplx tau = z.tau(tv_->xi0, true);
        if (std::abs(tau) == 0.0) throw numeric_error("channel_kernel: threshold singularity");
        double w = tv_->phi0.at_a();
        cplx scal = 0.5 * I_unit * std::exp(I_unit * tau * std::abs(s)) / tau;
        out << w * w, w * w, w * w, w * w;
        out *= scal;
    } else if (j == 1) {
        if (!tv_->xi1) throw numeric_error("channel_kernel: channel 1 absent (alpha a <= 1)");
        cplx tau = z.tau(*tv_->xi1, false);
        if (std::abs(tau) == 0.0) throw numeric_error("channel_kernel: threshold singularity");
        double w = tv_->phi1->at_a();
        cplx scal = 0.5 * I_unit * std::exp(I_unit * tau * std::abs(s)) / tau;
        out << w * w, -w * w, -w * w, w * w;
        out *= scal;
    } else {
        throw std::invalid_argument("channel_kernel: j must be 0 or 1");
    }
    return out;
}

cplx LineKernelEvaluator::channel_even(const SheetedEnergy& z, double s) const {
    if (!tv_) return 0.0;
    double k0 = tv_->kappa0;
    double e = std::exp(-2.0 * a_ * k0);
    cplx tau = z.tau(tv_->xi0, true);
    // residue of the even multiplier at the secular root:
    // i e^{i tau |s|} kappa0 (1+e)/(tau (2 + 2 a alpha e))
    return I_unit * std::exp(I_unit * tau * std::abs(s)) * k0 * (1.0 + e) /
           (tau * (2.0 + 2.0 * a_ * alpha_ * e));
}

cplx LineKernelEvaluator::channel_odd(const SheetedEnergy& z, double s) const {
    if (!tv_ || !tv_->kappa1) return 0.0;
    double k1 = *tv_->kappa1;
    double e = std::exp(-2.0 * a_ * k1);
    cplx tau = z.tau(*tv_->xi1, false);
    return I_unit * std::exp(I_unit * tau * std::abs(s)) * k1 * (1.0 - e) /
           (tau * (2.0 - 2.0 * a_ * alpha_ * e));
}

struct WrapPlanBuilder {
    const LineKernelEvaluator& ev;
    const SheetedEnergy& z;
    bool even_sector;
    WrapPlan plan;

    void add(cplx g, cplx c) {
        if (c == cplx(0.0)) return;
        plan.g.push_back(g);
        plan.c.push_back(c);
    }

    // g(v) = sqrt(v^2 - z), principal branch (Re >= 0 near the cut image)
    cplx gfun(cplx v) const { return std::sqrt(v * v - z.z); }

    // correction values on the two sides of the cut, kappa = +- i v
    cplx corr_side(cplx v, int side) const {
        cplx kappa = cplx(0, side) * v;  // side=+1: kappa=+iv, -1: kappa=-iv
        return corr(kappa, ev.a(), ev.alpha(), even_sector);
    }

    void head(double V0, const GaussRule& gl) {
        // graded start to resolve near-threshold structure, then uniform
        double scale = 0.25;
        if (ev.spectrum()) {
            scale = std::min(scale, 0.5 * ev.spectrum()->kappa0);
            if (ev.spectrum()->kappa1) scale = std::min(scale, 0.5 * *ev.spectrum()->kappa1);
        }
        std::vector<double> edges{0.0};
        double v = std::min(scale, V0);
        while (v < std::min(1.0, V0)) {
            edges.push_back(v);
            v *= 2;
        }
        double len = std::min(1.5 / ev.a(), V0 / 4.0);
        double last = edges.back();
        int nun = std::max(1, (int)std::ceil((V0 - last) / len));
        for (int i = 1; i <= nun; ++i) edges.push_back(last + (V0 - last) * i / nun);

        for (size_t e = 0; e + 1 < edges.size(); ++e) {
            double mid = 0.5 * (edges[e] + edges[e + 1]), half = 0.5 * (edges[e + 1] - edges[e]);
            for (size_t i = 0; i < gl.x.size(); ++i) {
                double vv = mid + half * gl.x[i];
                cplx D = corr_side(vv, -1) - corr_side(vv, +1);
                cplx g = gfun(vv);
                add(g, -I_unit / (2 * pi) * gl.w[i] * half * D * vv / g);
            }
        }
    }

    void tail_k0(double V0, const GaussRule& gl, double tol) {
        double al = ev.alpha();
        double lo = V0;
        for (int panel = 0; panel < 44; ++panel) {
            double hi = 2 * lo;
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            double mag = 0;
            for (size_t i = 0; i < gl.x.size(); ++i) {
                double vv = mid + half * gl.x[i];
                // D0 = q(m0-) - q(m0+), the non-oscillatory single-line part
                cplx m0p = -I_unit / (2.0 * vv), m0m = I_unit / (2.0 * vv);
                cplx D0 = al * m0m * m0m / (1.0 - al * m0m) - al * m0p * m0p / (1.0 - al * m0p);
                cplx g = gfun(vv);
                cplx c = -I_unit / (2 * pi) * gl.w[i] * half * D0 * vv / g;
                add(g, c);
                mag += std::abs(c);
            }
            if (mag < 0.05 * tol) break;
            lo = hi;
        }
    }

    // oscillatory components e^{-+ 2 i a k v}: rotate each side vertically
    void tail_oscillatory(double V0, const GaussRule& gl, double tol) {
        double al = ev.alpha(), a = ev.a();
        for (int side = +1; side >= -1; side -= 2) {
            // side=+1: kappa=+iv, E = e^{-2iav}, rotate v -> V0 - i w
            // side=-1: kappa=-iv, E = e^{+2iav}, rotate v -> V0 + i w
            cplx rot = (side > 0) ? cplx(0, -1) : cplx(0, 1);
            double sgn_contrib = (side > 0) ? -1.0 : 1.0;  // D = C(-) - C(+)
            for (int k = 1; k <= 80; ++k) {
                double lam = 2.0 * a * k;
                double bnd_q = al / (4.0 * V0 * V0) * 1.3;
                double rmag = al / (2.0 * V0) * 1.3;
                double term_bound = bnd_q * std::pow(rmag, std::max(0, k - 2)) * (k >= 2 ? (1 + rmag) * (1 + rmag) : 3.0);
                if (term_bound < 0.02 * tol && k > 2) break;
                double seg[4] = {0.0, 4.0 / lam, 12.0 / lam, 28.0 / lam};
                for (int pn = 0; pn < 3; ++pn) {
                    double mid = 0.5 * (seg[pn] + seg[pn + 1]), half = 0.5 * (seg[pn + 1] - seg[pn]);
                    for (size_t i = 0; i < gl.x.size(); ++i) {
                        double w = mid + half * gl.x[i];
                        cplx v = V0 + rot * w;
                        cplx m0 = -cplx(0, side) / (2.0 * v);
                        cplx q = al * m0 * m0 / (1.0 - al * m0);
                        cplx r = al * m0 / (1.0 - al * m0);
                        cplx gamma_k;
                        if (k == 1) gamma_k = r + 2.0;
                        else gamma_k = std::pow(r, k - 2) * (1.0 + r) * (1.0 + r);
                        if (!even_sector && (k % 2 == 1)) gamma_k = -gamma_k;
                        cplx E = std::exp(-cplx(0, side) * 2.0 * a * v);  // e^{-+2iav}
                        cplx ck = q * gamma_k * std::pow(E, k);
                        cplx g = gfun(v);
                        // both rotations combine to +(1/2pi) int ... dw
                        cplx c = sgn_contrib * (-I_unit / (2 * pi)) * rot * gl.w[i] * half * ck * v / g;
                        add(g, c);
                    }
                }
            }
        }
    }
};

WrapPlan LineKernelEvaluator::wrap_plan(const SheetedEnergy& z, bool even_sector) const {
    WrapPlan empty;
    if (!(alpha_ > 0)) return empty;
    WrapPlanBuilder b{*this, z, even_sector, {}};
    double V0 = std::max(3.0 * alpha_ + 2.0, 2.0 * std::abs(z.chat()) + 2.0);
    GaussRule gl_head(16 * opt_.refine), gl_tail(12 * opt_.refine), gl_osc(10 * opt_.refine);
    b.head(V0, gl_head);
    b.tail_k0(V0, gl_tail, opt_.tol);
    b.tail_oscillatory(V0, gl_osc, opt_.tol);
    return std::move(b.plan);
}

cplx LineKernelEvaluator::wrap(const SheetedEnergy& z, bool even_sector, double s) const {
    return wrap_plan(z, even_sector).eval(std::abs(s));
}

cplx LineKernelEvaluator::even(const SheetedEnergy& z, double s) const {
    cplx chat = z.chat();
    double sa = std::abs(s);
    if (sa == 0.0) throw numeric_error("even kernel: log singularity at s = 0");
    cplx free = (bessel_k0(chat * sa) + bessel_k0(chat * std::sqrt(sa * sa + 4 * a_ * a_))) / (2 * pi);
    return free + channel_even(z, s) + wrap(z, true, s);
}

cplx LineKernelEvaluator::odd(const SheetedEnergy& z, double s) const {
    cplx chat = z.chat();
    double sa = std::abs(s);
    if (sa == 0.0) throw numeric_error("odd kernel: log singularity at s = 0");
    cplx free = (bessel_k0(chat * sa) - bessel_k0(chat * std::sqrt(sa * sa + 4 * a_ * a_))) / (2 * pi);
    return free + channel_odd(z, s) + wrap(z, false, s);
}

Eigen::Matrix2cd LineKernelEvaluator::line_kernel(const SheetedEnergy& z, double s) const {
    cplx e = even(z, s), o = odd(z, s);
    Eigen::Matrix2cd K;
    K << 0.5 * (e + o), 0.5 * (e - o), 0.5 * (e - o), 0.5 * (e + o);
    return K;
}

cplx LineKernelEvaluator::same_nonlog(const SheetedEnergy& z, double s) const {
    return 0.5 * (channel_even(z, s) + channel_odd(z, s) + wrap(z, true, s) + wrap(z, false, s));
}

cplx LineKernelEvaluator::cross(const SheetedEnergy& z, double s) const {
    cplx chat = z.chat();
    cplx free = bessel_k0(chat * std::sqrt(s * s + 4 * a_ * a_)) / (2 * pi);
    return free + 0.5 * (channel_even(z, s) - channel_odd(z, s) + wrap(z, true, s) - wrap(z, false, s));
}

Eigen::Matrix2cd LineKernelEvaluator::line_kernel_direct(cplx z, double s, double tol,
                                                         double* achieved_tol) const {
    cplx chat = std::sqrt(-z);
    double sa = std::abs(s);
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    if (sa > 0) {
        cplx k_same = bessel_k0(chat * sa) / (2 * pi);
        out(0, 0) = out(1, 1) = k_same;
    } else {
        out(0, 0) = out(1, 1) = std::numeric_limits<double>::infinity();
    }
    cplx k_cross = bessel_k0(chat * std::sqrt(sa * sa + 4 * a_ * a_)) / (2 * pi);
    out(0, 1) = out(1, 0) = k_cross;
    if (!(alpha_ > 0)) {
        if (achieved_tol) *achieved_tol = 1e-14;
        return out;
    }
    // analytic rational part alpha m0^2 -> alpha e^{-chat|s|}/(8 chat) on the diagonal
    cplx rational = alpha_ * std::exp(-chat * sa) / (8.0 * chat);
    out(0, 0) += rational;
    out(1, 1) += rational;

    double P = std::max(3.0 * alpha_ + 6.0, std::sqrt(alpha_ * alpha_ / (16.0 * tol)));
    P = std::min(P, 20000.0);
    double L = std::min(pi / (2.0 * std::max(sa, 0.25)), 3.0);
    // transverse-channel poles of the multiplier near the real p axis need
    // panels resolving the Lorentzian width |Im p_pole|
    std::vector<std::pair<double, double>> peaks;  // (Re p, width)
    if (tv_) {
        for (int j = 0; j < tv_->count(); ++j) {
            double xi = j == 0 ? tv_->xi0 : *tv_->xi1;
            cplx pp = SheetedEnergy::sqrt_up(z - xi);
            double w = std::abs(pp.imag());
            if (pp.real() > -0.5 && w < L) {
                if (w < 1e-6)
                    throw numeric_error("line_kernel_direct: z too close to the continuum");
                peaks.emplace_back(std::abs(pp.real()), w);
            }
        }
    }
    auto panel_len = [&](double p) {
        double len = L;
        for (auto& pk : peaks)
            if (std::abs(p - pk.first) < 30 * pk.second + 1.0) len = std::min(len, pk.second / 3);
        return len;
    };
    GaussRule gl(16);
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    double p0 = 0;
    while (p0 < P) {
        double p1 = std::min(P, p0 + panel_len(p0));
        double mid = 0.5 * (p0 + p1), half = 0.5 * (p1 - p0);
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double p = mid + half * gl.x[i];
            Eigen::Matrix2cd S = line_resolvent_multiplier(p, z);
            cplx m0 = free_multiplier(p, z, 0.0);
            cplx m1 = free_multiplier(p, z, 2.0 * a_);
            S(0, 0) -= m0 + alpha_ * m0 * m0;
            S(1, 1) -= m0 + alpha_ * m0 * m0;
            S(0, 1) -= m1;
            S(1, 0) -= m1;
            acc += gl.w[i] * half * std::cos(p * sa) * S;
        }
        p0 = p1;
    }
    out += acc / pi;
    if (achieved_tol)
        *achieved_tol = alpha_ * alpha_ / (16.0 * P * P) / pi + 1e-11;
    return out;
}

Eigen::Matrix2cd LineKernelEvaluator::boundary_value(double lambda, double s, bool second_sheet,
                                                     bool from_below, bool* converged) const {
    const double eps[3] = {1e-3, 1e-4, 1e-5};
    Eigen::Matrix2cd k[3];
    for (int i = 0; i < 3; ++i) {
        double im = from_below ? -eps[i] : eps[i];
        SheetedEnergy ze(cplx(lambda, im), second_sheet ? Sheet::second : Sheet::first);
        k[i] = line_kernel(ze, s);
    }
    // two Richardson levels for f(eps) = f0 + c eps + O(eps^2), ratio 10
    Eigen::Matrix2cd f01 = (10.0 * k[1] - k[0]) / 9.0;
    Eigen::Matrix2cd f12 = (10.0 * k[2] - k[1]) / 9.0;
    Eigen::Matrix2cd ex = (100.0 * f12 - f01) / 99.0;
    if (converged) {
        double num = (f12 - f01).cwiseAbs().maxCoeff();
        double den = std::max(1e-30, ex.cwiseAbs().maxCoeff());
        *converged = (num / den) < 1e-4;
    }
    return ex;
}

}  // namespace leakyline
