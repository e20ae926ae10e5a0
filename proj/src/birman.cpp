#include "leakyline/birman.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "leakyline/bessel.hpp"
#include "leakyline/rootfind.hpp"

namespace leakyline {

namespace {
constexpr double kDerivStep = 1e-6;  // central difference step for dK/dz
}  // namespace

Eigen::MatrixXcd LineDiscretization::same_matrix() const {
    Eigen::MatrixXcd M(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            int m = std::abs(k - l);
            M(k, l) = 0.5 * (even[m] + odd[m]);
        }
    return M;
}

Eigen::MatrixXcd LineDiscretization::cross_matrix() const {
    Eigen::MatrixXcd M(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            int m = std::abs(k - l);
            M(k, l) = 0.5 * (even[m] - odd[m]);
        }
    return M;
}

Eigen::MatrixXcd LineDiscretization::sector_matrix(bool even_sector) const {
    Eigen::MatrixXcd M(n, n);
    const auto& t = even_sector ? even : odd;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) M(k, l) = t[std::abs(k - l)];
    return M;
}

LineDiscretization discretize_line_kernel(const LineKernelEvaluator& ev, const SheetedEnergy& z,
                                          const QuadratureSpec& quad) {
    if (quad.rule != QuadratureSpec::Rule::uniform)
        throw numeric_error("discretize_line_kernel: gauss_panels rule is handled by assemble_B only");
    const int n = quad.n_nodes;
    const double h = quad.spacing(), a = ev.a();
    LineDiscretization d;
    d.n = n;
    d.h = h;
    d.z = z;
    d.even.resize(n);
    d.odd.resize(n);

    cplx chat = z.chat();
    // running integrals of the same-line free kernel (1/2pi) K0(chat t)
    std::vector<cplx> J0(n + 2), J1(n + 2);
    J0[0] = 0;
    J1[0] = 0;
    GaussRule gl(8);
    for (int j = 1; j <= n + 1; ++j) {
        double mid = (j - 0.5) * h, half = 0.5 * h;
        cplx acc = 0;
        for (size_t i = 0; i < gl.x.size(); ++i) {
            double t = mid + half * gl.x[i];
            acc += gl.w[i] * bessel_k0(chat * t);
        }
        J0[j] = J0[j - 1] + acc * half / (2 * pi);
        cplx u = chat * (double(j) * h);
        J1[j] = (1.0 - u * bessel_k1(u)) / (2 * pi * chat * chat);
    }
    auto J0s = [&](int j) { return j >= 0 ? J0[j] : -J0[-j]; };
    auto J1e = [&](int j) { return J1[std::abs(j)]; };

    // spectral-cut plans reused across the whole separation grid
    WrapPlan pe = ev.wrap_plan(z, true), po = ev.wrap_plan(z, false);
    std::vector<cplx> we = pe.eval_grid(h, n), wo = po.eval_grid(h, n);

    for (int m = 0; m < n; ++m) {
        double s = m * h;
        cplx hatlog = (1.0 - m) * (J0s(m) - J0s(m - 1)) + (J1e(m) - J1e(m - 1)) / h +
                      (1.0 + m) * (J0s(m + 1) - J0s(m)) - (J1e(m + 1) - J1e(m)) / h;
        cplx ce = ev.channel_even(z, s), co = ev.channel_odd(z, s);
        cplx k2a = bessel_k0(chat * std::sqrt(s * s + 4 * a * a)) / (2 * pi);
        d.even[m] = hatlog + h * (ce + we[m] + k2a);
        d.odd[m] = hatlog + h * (co + wo[m] - k2a);
    }
    // one-sided |s| kink of the non-log sector kernels across the diagonal cell
    d.even[0] += (h * h / 4.0) * ev.same_kink_slope();
    d.odd[0] += (h * h / 4.0) * ev.same_kink_slope();
    return d;
}

bool KernelMatrix::is_real(double tol) const {
    return full.imag().cwiseAbs().maxCoeff() < tol * (1.0 + full.real().cwiseAbs().maxCoeff());
}

BirmanSchwinger::BirmanSchwinger(ModelConfig cfg, QuadratureSpec quad, KernelOptions kopt)
    : cfg_(std::move(cfg)),
      quad_(quad),
      tv_(solve_equal(cfg_.alpha, cfg_.a)),
      ev_(cfg_.alpha, cfg_.a, kopt) {
    cfg_.validate();
    xs_ = quad_.nodes();
    vplus_ = cfg_.v_plus.sample(xs_);
    vminus_ = cfg_.v_minus.sample(xs_);
    wplus_half_.resize(xs_.size());
    wminus_half_.resize(xs_.size());
    bool nonpos = true, nonneg = true;
    for (size_t i = 0; i < xs_.size(); ++i) {
        nonpos = nonpos && vplus_[i] <= 0 && vminus_[i] <= 0;
        nonneg = nonneg && vplus_[i] >= 0 && vminus_[i] >= 0;
    }
    sign_definite_ = nonpos || nonneg;
    sign_ = nonpos && !nonneg ? -1.0 : 1.0;
}

KernelMatrix BirmanSchwinger::assemble_B(const SheetedEnergy& z) const {
    const int n = int(xs_.size());
    KernelMatrix out;
    out.z = z;
    out.nodes = xs_;
    out.h = quad_.spacing();
    out.full.resize(2 * n, 2 * n);

    if (quad_.rule == QuadratureSpec::Rule::uniform) {
        LineDiscretization d = discretize_line_kernel(ev_, z, quad_);
        Eigen::MatrixXcd S = d.same_matrix(), C = d.cross_matrix();
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double ap = std::sqrt(std::abs(vplus_[k])), am = std::sqrt(std::abs(vminus_[k]));
                double bp = signed_sqrt(vplus_[l]), bm = signed_sqrt(vminus_[l]);
                out.full(k, l) = ap * S(k, l) * bp;
                out.full(k, n + l) = ap * C(k, l) * bm;
                out.full(n + k, l) = am * C(k, l) * bp;
                out.full(n + k, n + l) = am * S(k, l) * bm;
            }
    } else {
        // plain Nystrom on Gauss panels; diagonal via the local cell average
        auto ws = quad_.weights();
        cplx chat = z.chat();
        WrapPlan pe = ev_.wrap_plan(z, true), po = ev_.wrap_plan(z, false);
        double a = ev_.a();
        auto nonlog_same = [&](double s) {
            return 0.5 * (ev_.channel_even(z, s) + ev_.channel_odd(z, s) + pe.eval(s) + po.eval(s));
        };
        auto cross_at = [&](double s) {
            return bessel_k0(chat * std::sqrt(s * s + 4 * a * a)) / (2 * pi) +
                   0.5 * (ev_.channel_even(z, s) - ev_.channel_odd(z, s) + pe.eval(s) - po.eval(s));
        };
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                cplx same_kl, cross_kl;
                double s = std::abs(xs_[k] - xs_[l]);
                if (k == l) {
                    double cell = ws[k];
                    cplx avg = (2.0 / cell) * bessel_k0_integral(chat * (0.5 * cell)) / (2 * pi * chat);
                    same_kl = avg + nonlog_same(0.0);
                } else {
                    same_kl = bessel_k0(chat * s) / (2 * pi) + nonlog_same(s);
                }
                cross_kl = cross_at(s);
                double wk = std::sqrt(ws[k]), wl = std::sqrt(ws[l]);
                double ap = std::sqrt(std::abs(vplus_[k])), am = std::sqrt(std::abs(vminus_[k]));
                double bp = signed_sqrt(vplus_[l]), bm = signed_sqrt(vminus_[l]);
                out.full(k, l) = wk * ap * same_kl * bp * wl;
                out.full(k, n + l) = wk * ap * cross_kl * bm * wl;
                out.full(n + k, l) = wk * am * cross_kl * bp * wl;
                out.full(n + k, n + l) = wk * am * same_kl * bm * wl;
            }
        }
    }
    out.hs_norm = out.full.norm();
    return out;
}

Eigen::MatrixXd BirmanSchwinger::B_real(double z_real) const {
    if (!(z_real < tv_.xi0)) throw numeric_error("B_real: z must lie below xi0");
    KernelMatrix km = assemble_B(SheetedEnergy(cplx(z_real, 0.0)));
    return km.full.real();
}

double BirmanSchwinger::one_plus_B_min_eig(double z_real) const {
    Eigen::MatrixXd B = B_real(z_real);
    if (sign_definite_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        return 1.0 + es.eigenvalues().minCoeff();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        auto ev = es.eigenvalues()[i];
        if (std::abs(ev.imag()) < 1e-8 * (1 + std::abs(ev.real())))
            best = std::min(best, 1.0 + ev.real());
    }
    return best;
}

namespace {

// eigenvalue curves of B cross -1 one per bound state; counting them makes
// the scan robust when several states coexist (the smallest-eigenvalue curve
// alone only shows the deepest one)
int count_at_or_below(const Eigen::MatrixXd& B, bool symmetric, double level = -1.0) {
    int cnt = 0;
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()[i] <= level) ++cnt;
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            auto ev = es.eigenvalues()[i];
            if (std::abs(ev.imag()) < 1e-8 * (1 + std::abs(ev.real())) && ev.real() <= level)
                ++cnt;
        }
    }
    return cnt;
}

// 1 + (eigenvalue of B nearest -1): smooth through the crossing once the
// count bisection has isolated a single branch
double nearest_curve(const Eigen::MatrixXd& B, bool symmetric) {
    double best = 1e300;
    if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (std::abs(es.eigenvalues()[i] + 1.0) < std::abs(best + 1.0))
                best = es.eigenvalues()[i];
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            auto ev = es.eigenvalues()[i];
            if (std::abs(ev.imag()) < 1e-8 * (1 + std::abs(ev.real())) &&
                std::abs(ev.real() + 1.0) < std::abs(best + 1.0))
                best = ev.real();
        }
    }
    return 1.0 + best;
}

}  // namespace

std::vector<DiscreteState> BirmanSchwinger::find_discrete(double z_lo, double z_hi, int grid) const {
    std::vector<DiscreteState> out;
    double margin = 1e-7 * (1 + std::abs(tv_.xi0));
    double hi = std::min(z_hi, tv_.xi0 - margin);
    if (!(z_lo < hi)) return out;

    auto count = [&](double z) { return count_at_or_below(B_real(z), sign_definite_); };
    std::vector<double> zs(grid);
    std::vector<int> cnt(grid);
    for (int i = 0; i < grid; ++i) {
        zs[i] = z_lo + (hi - z_lo) * double(i) / double(grid - 1);
        cnt[i] = count(zs[i]);
    }
    const int n = int(xs_.size());
    for (int i = 0; i + 1 < grid; ++i) {
        for (int level = cnt[i] + 1; level <= cnt[i + 1]; ++level) {
            // smallest z with count >= level, then polish on the crossing curve
            double lo = zs[i], hh = zs[i + 1];
            while (hh - lo > 1e-6) {
                double mid = 0.5 * (lo + hh);
                if (count(mid) >= level) hh = mid; else lo = mid;
            }
            double root = bisect_newton(
                [&](double zz) { return nearest_curve(B_real(zz), sign_definite_); }, lo, hh, 1e-8,
                1e-12);
        DiscreteState st;
        st.z = root;

        Eigen::MatrixXd B = B_real(root);
        Eigen::VectorXd u;
        if (sign_definite_) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
            int idx = 0;
            double best = 1e300;
            for (int j = 0; j < es.eigenvalues().size(); ++j) {
                double d = std::abs(1.0 + es.eigenvalues()[j]);
                if (d < best) { best = d; idx = j; }
            }
            u = es.eigenvectors().col(idx);
            st.multiplicity = 0;
            for (int j = 0; j < es.eigenvalues().size(); ++j)
                if (std::abs(1.0 + es.eigenvalues()[j]) < 1e-6) ++st.multiplicity;
            st.multiplicity = std::max(st.multiplicity, 1);
        } else {
            Eigen::EigenSolver<Eigen::MatrixXd> ges(B);
            int idx = 0;
            double best = 1e300;
            for (int j = 0; j < ges.eigenvalues().size(); ++j) {
                double d = std::abs(ges.eigenvalues()[j] + 1.0);
                if (d < best) { best = d; idx = j; }
            }
            u = ges.eigenvectors().col(idx).real();
            st.multiplicity = 1;
        }

        // trace reconstruction psi_line = -K V^{1/2} u and L2(R^2) normalization
        SheetedEnergy zc(cplx(root, 0.0));
        LineDiscretization d0 = discretize_line_kernel(ev_, zc, quad_);
        LineDiscretization dp =
            discretize_line_kernel(ev_, zc.with(cplx(root + kDerivStep, 0.0)), quad_);
        LineDiscretization dm =
            discretize_line_kernel(ev_, zc.with(cplx(root - kDerivStep, 0.0)), quad_);
        Eigen::MatrixXd S = d0.same_matrix().real(), C = d0.cross_matrix().real();
        Eigen::MatrixXd Sp = (dp.same_matrix().real() - dm.same_matrix().real()) / (2 * kDerivStep),
                        Cp = (dp.cross_matrix().real() - dm.cross_matrix().real()) / (2 * kDerivStep);
        Eigen::VectorXd vp(n), vm(n);
        for (int k = 0; k < n; ++k) {
            vp[k] = signed_sqrt(vplus_[k]) * u[k];
            vm[k] = signed_sqrt(vminus_[k]) * u[n + k];
        }
        Eigen::VectorXd fp = -(S * vp + C * vm), fm = -(C * vp + S * vm);
        Eigen::VectorXd wp(n), wm(n);
        for (int k = 0; k < n; ++k) {
            wp[k] = vplus_[k] * fp[k];
            wm[k] = vminus_[k] * fm[k];
        }
        double h = quad_.spacing();
        double norm2 = h * (wp.dot(Sp * wp) + wp.dot(Cp * wm) + wm.dot(Cp * wp) + wm.dot(Sp * wm));
        double scale = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 1.0;
        st.xs = xs_;
        st.f_plus.resize(n);
        st.f_minus.resize(n);
        for (int k = 0; k < n; ++k) {
            st.f_plus[k] = fp[k] * scale;
            st.f_minus[k] = fm[k] * scale;
        }
        // Hellmann-Feynman slope of mu_min (diagnostic)
        double uu = u.squaredNorm();
        Eigen::VectorXd Bu(2 * n);
        for (int k = 0; k < n; ++k) {
            double ap = std::sqrt(std::abs(vplus_[k])), am = std::sqrt(std::abs(vminus_[k]));
            Bu[k] = ap * (Sp.row(k).dot(vp) + Cp.row(k).dot(vm));
            Bu[n + k] = am * (Cp.row(k).dot(vp) + Sp.row(k).dot(vm));
        }
        st.mu_slope = u.dot(Bu) / uu;
        out.push_back(std::move(st));
        }
    }
    return out;
}

Eigen::MatrixXd BirmanSchwinger::B_odd(double nu) const {
    if (!cfg_.mirror_symmetric()) throw numeric_error("odd sector requires v_plus == v_minus");
    LineDiscretization d = discretize_line_kernel(ev_, SheetedEnergy(cplx(nu, 0.0)), quad_);
    const int n = d.n;
    Eigen::MatrixXcd To = d.sector_matrix(false);
    if (To.imag().cwiseAbs().maxCoeff() > 1e-10 * (1 + To.real().cwiseAbs().maxCoeff()))
        throw numeric_error("odd kernel not real in the embedded window");
    Eigen::MatrixXd B(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            B(k, l) = std::sqrt(std::abs(vplus_[k])) * To(k, l).real() * signed_sqrt(vplus_[l]);
    return B;
}

double BirmanSchwinger::odd_min_eig(double nu) const {
    Eigen::MatrixXd B = B_odd(nu);
    if (sign_definite_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
        return 1.0 + es.eigenvalues().minCoeff();
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        auto ev = es.eigenvalues()[i];
        if (std::abs(ev.imag()) < 1e-8 * (1 + std::abs(ev.real())))
            best = std::min(best, 1.0 + ev.real());
    }
    return best;
}

std::vector<EmbeddedState> BirmanSchwinger::find_embedded(int grid) const {
    std::vector<EmbeddedState> out;
    if (!cfg_.mirror_symmetric())
        throw numeric_error("find_embedded: mirror symmetry (v_plus == v_minus) required");
    if (!tv_.xi1) return out;  // mu0 = 0 window empty below the continuum
    double mu0 = *tv_.xi1;
    double span = mu0 - tv_.xi0;
    double lo = tv_.xi0 + 1e-4 * span, hi = mu0 - 1e-6 * span;

    auto count = [&](double nu) { return count_at_or_below(B_odd(nu), sign_definite_); };
    std::vector<double> nus(grid);
    std::vector<int> cnt(grid);
    for (int i = 0; i < grid; ++i) {
        nus[i] = lo + (hi - lo) * double(i) / double(grid - 1);
        cnt[i] = count(nus[i]);
    }
    const int n = int(xs_.size());
    for (int i = 0; i + 1 < grid; ++i) {
        for (int level = cnt[i] + 1; level <= cnt[i + 1]; ++level) {
            double blo = nus[i], bhi = nus[i + 1];
            while (bhi - blo > 1e-6) {
                double mid = 0.5 * (blo + bhi);
                if (count(mid) >= level) bhi = mid; else blo = mid;
            }
            double root = bisect_newton(
                [&](double zz) { return nearest_curve(B_odd(zz), sign_definite_); }, blo, bhi, 1e-8,
                1e-12);
        EmbeddedState st;
        st.nu = root;
        SheetedEnergy zc(cplx(root, 0.0));
        LineDiscretization d0 = discretize_line_kernel(ev_, zc, quad_);
        LineDiscretization dp =
            discretize_line_kernel(ev_, zc.with(cplx(root + kDerivStep, 0.0)), quad_);
        LineDiscretization dm =
            discretize_line_kernel(ev_, zc.with(cplx(root - kDerivStep, 0.0)), quad_);
        Eigen::MatrixXd To = d0.sector_matrix(false).real();
        Eigen::MatrixXd Top =
            (dp.sector_matrix(false).real() - dm.sector_matrix(false).real()) / (2 * kDerivStep);
        Eigen::MatrixXd B(n, n);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                B(k, l) = std::sqrt(std::abs(vplus_[k])) * To(k, l) * signed_sqrt(vplus_[l]);
        Eigen::VectorXd u;
        if (sign_definite_) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
            int idx = 0;
            double best = 1e300;
            for (int j = 0; j < es.eigenvalues().size(); ++j) {
                double dd = std::abs(1.0 + es.eigenvalues()[j]);
                if (dd < best) { best = dd; idx = j; }
            }
            u = es.eigenvectors().col(idx);
            st.multiplicity = 0;
            for (int j = 0; j < es.eigenvalues().size(); ++j)
                if (std::abs(1.0 + es.eigenvalues()[j]) < 1e-6) ++st.multiplicity;
            st.multiplicity = std::max(1, st.multiplicity);
        } else {
            Eigen::EigenSolver<Eigen::MatrixXd> ges(B);
            int idx = 0;
            double best = 1e300;
            for (int j = 0; j < ges.eigenvalues().size(); ++j) {
                double dd = std::abs(ges.eigenvalues()[j] + 1.0);
                if (dd < best) { best = dd; idx = j; }
            }
            u = ges.eigenvectors().col(idx).real();
            st.multiplicity = 1;
        }
        Eigen::VectorXd vhalf(n);
        for (int k = 0; k < n; ++k) vhalf[k] = signed_sqrt(vplus_[k]) * u[k];
        Eigen::VectorXd f = -(To * vhalf);
        Eigen::VectorXd w(n);
        for (int k = 0; k < n; ++k) w[k] = vplus_[k] * f[k];
        double h = quad_.spacing();
        double norm2 = 2.0 * h * w.dot(Top * w);  // odd extension doubles the plane norm
        st.norm2d = norm2;
        double scale = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 1.0;
        st.xs = xs_;
        st.trace.resize(n);
        for (int k = 0; k < n; ++k) st.trace[k] = f[k] * scale;
        st.u = u;
        out.push_back(std::move(st));
        }
    }
    return out;
}

bool BirmanSchwinger::certify_no_spectrum_below(double z_probe, int probes) const {
    double margin = 1e-6 * (1 + std::abs(tv_.xi0));
    double hi = tv_.xi0 - margin;
    if (!(z_probe < hi)) throw std::invalid_argument("certify_no_spectrum_below: probe above xi0");
    for (int i = 0; i < probes; ++i) {
        double t = probes == 1 ? 0.0 : double(i) / double(probes - 1);
        double z = hi + (z_probe - hi) * t;
        if (one_plus_B_min_eig(z) <= 0) return false;
    }
    return true;
}

}  // namespace leakyline
