#include "leakyline/bounds.hpp"

#include <cmath>

#include "leakyline/quadrature.hpp"

namespace leakyline {

namespace {

// fixed composite Gauss quadrature over [lo, hi]
double integrate(const std::function<double(double)>& f, double lo, double hi, int panels = 64) {
    static const GaussRule gl(12);
    double acc = 0, w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = lo + (p + 0.5) * w;
        for (size_t i = 0; i < gl.x.size(); ++i) acc += gl.w[i] * f(mid + 0.5 * w * gl.x[i]);
    }
    return acc * 0.5 * w;
}

// panels split at the supplied breakpoints (box edges and similar)
double integrate_split(const std::function<double(double)>& f, double lo, double hi,
                       const std::vector<double>& cuts, int panels_per_segment = 48) {
    std::vector<double> edges{lo};
    for (double c : cuts)
        if (c > lo + 1e-14 && c < hi - 1e-14) edges.push_back(c);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    double acc = 0;
    for (size_t s = 0; s + 1 < edges.size(); ++s)
        acc += integrate(f, edges[s], edges[s + 1], panels_per_segment);
    return acc;
}

// the standard mollifier exp(-1/(1-x^2)) on (-1,1), L2-normalized lazily
struct Bump {
    double norm = 0, dnorm = 0, ddnorm = 0;  // ||phi||, ||phi'||, ||phi''||
    Bump() {
        auto phi = [](double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1 - x * x)) : 0.0; };
        auto dphi = [&](double x) {
            if (std::abs(x) >= 1) return 0.0;
            double u = 1 - x * x;
            return phi(x) * (-2 * x / (u * u));
        };
        auto ddphi = [&](double x) {
            if (std::abs(x) >= 1) return 0.0;
            double u = 1 - x * x;
            double g = -2 * x / (u * u);                    // (log phi)'
            double gp = -2 * (1 + 3 * x * x) / (u * u * u); // g'
            return phi(x) * (g * g + gp);
        };
        double n2 = integrate([&](double x) { return phi(x) * phi(x); }, -1, 1, 200);
        double d2 = integrate([&](double x) { return dphi(x) * dphi(x); }, -1, 1, 200);
        double dd2 = integrate([&](double x) { return ddphi(x) * ddphi(x); }, -1, 1, 200);
        norm = std::sqrt(n2);
        dnorm = std::sqrt(d2) / norm;
        ddnorm = std::sqrt(dd2) / norm;
    }
};

const Bump& bump() {
    static Bump b;
    return b;
}

}  // namespace

TransverseFactor TransverseFactor::from_eigenfunction(const TransverseEigenfunction& ef) {
    TransverseFactor t;
    t.phi = [ef](double x) { return ef(x); };
    t.dphi = [ef](double x) { return ef.derivative(x); };
    t.norm_sq = ef.norm_sq();
    t.grad_sq = ef.grad_norm_sq();  // piecewise closed form
    t.at_plus_a = ef(ef.a);
    t.at_minus_a = ef(-ef.a);
    return t;
}

TransverseFactor TransverseFactor::gaussian(double width, double a) {
    TransverseFactor t;
    double w2 = width * width;
    t.phi = [w2](double x) { return std::exp(-x * x / (2 * w2)); };
    t.dphi = [w2](double x) { return -x / w2 * std::exp(-x * x / (2 * w2)); };
    t.norm_sq = std::sqrt(pi * w2);
    t.grad_sq = 0.5 * std::sqrt(pi) / width;  // int (x/w^2)^2 e^{-x^2/w^2}
    t.at_plus_a = t.phi(a);
    t.at_minus_a = t.phi(-a);
    return t;
}

double disc_certificate(const ModelConfig& cfg, int n) {
    cfg.validate();
    auto tv = solve_equal(cfg.alpha, cfg.a);
    double phi0a = tv.phi0.at_a();
    // trapezoid phi_n: 1 on |x|<=n, linear ramp to 0 on n<=|x|<=2n
    auto phin2 = [n](double x) {
        double ax = std::abs(x);
        if (ax <= n) return 1.0;
        if (ax >= 2.0 * n) return 0.0;
        double t = (2.0 * n - ax) / double(n);
        return t * t;
    };
    double grad = 2.0 / double(n);
    std::vector<double> cuts = cfg.v_plus.breakpoints();
    for (double c : cfg.v_minus.breakpoints()) cuts.push_back(c);
    cuts.push_back(-double(n));
    cuts.push_back(double(n));
    double pot = integrate_split(
        [&](double x) { return (cfg.v_plus(x) + cfg.v_minus(x)) * phin2(x); }, -2.0 * n, 2.0 * n,
        cuts, std::max(24, int(std::min(2.0 * n, 2048.0))));
    return grad + phi0a * phi0a * pot;
}

double form_gap(const ModelConfig& cfg, const LineFunction& f, const TransverseFactor& phi) {
    auto tv = solve_equal(cfg.alpha, cfg.a);
    double f2 = integrate([&](double x) { return f.f(x) * f.f(x); }, f.x_lo, f.x_hi, 256);
    double df2 = integrate([&](double x) { return f.df(x) * f.df(x); }, f.x_lo, f.x_hi, 256);
    double vplus = integrate_split([&](double x) { return cfg.v_plus(x) * f.f(x) * f.f(x); },
                                   f.x_lo, f.x_hi, cfg.v_plus.breakpoints(), 96);
    double vminus = integrate_split([&](double x) { return cfg.v_minus(x) * f.f(x) * f.f(x); },
                                    f.x_lo, f.x_hi, cfg.v_minus.breakpoints(), 96);
    double pa = phi.at_plus_a, ma = phi.at_minus_a;
    double energy = df2 * phi.norm_sq + f2 * phi.grad_sq
                    + vplus * pa * pa + vminus * ma * ma
                    - cfg.alpha * f2 * (pa * pa + ma * ma);
    return energy - tv.xi0 * f2 * phi.norm_sq;
}

double lower_bound_gap(const ModelConfig& cfg, const LineFunction& f, const TransverseFactor& phi) {
    auto tv = solve_equal(cfg.alpha, cfg.a);
    double lhs = form_gap(cfg, f, phi);
    double df2 = integrate([&](double x) { return f.df(x) * f.df(x); }, f.x_lo, f.x_hi, 256);
    std::vector<double> cuts = cfg.v_plus.breakpoints();
    for (double c : cfg.v_minus.breakpoints()) cuts.push_back(c);
    double lam = integrate_split(
        [&](double x) {
            double lv = lambda_tilde(cfg.v_plus(x), cfg.v_minus(x), tv);
            return lv * f.f(x) * f.f(x);
        },
        f.x_lo, f.x_hi, cuts, 48);
    double rhs = df2 * phi.norm_sq + lam * phi.norm_sq;
    return lhs - rhs;
}

double rho_weight(const LineFunction& f, const TransverseFactor& phi, double x1_0) {
    double w = integrate(
        [&](double x) {
            double d = x - x1_0;
            return f.f(x) * f.f(x) / (1.0 + d * d);
        },
        f.x_lo, f.x_hi, 256);
    return w * phi.norm_sq;
}

HardyCertificate hardy_local(const ModelConfig& cfg, std::span<const double> grid) {
    cfg.validate();
    for (double x : grid)
        if (cfg.v_plus(x) < -1e-14 || cfg.v_minus(x) < -1e-14)
            throw std::invalid_argument("hardy_local: potentials must be nonnegative");
    HardyCertificate cert;
    cert.kind = HardyCertificate::Kind::local;
    cert.grid.assign(grid.begin(), grid.end());
    cert.lambda_samples = lambda_field(cfg, grid);
    return cert;
}

HardyCertificate hardy_global(const ModelConfig& cfg, double x1_0, double R, double V0) {
    cfg.validate();
    if (!(R > 0) || !(V0 > 0)) throw std::invalid_argument("hardy_global: R, V0 must be positive");
    // hypothesis: on (x1_0 - R, x1_0 + R), V+ >= V0 or V- >= V0 pointwise
    for (int i = 0; i <= 2000; ++i) {
        double x = x1_0 - R + 2 * R * i / 2000.0;
        if (!(cfg.v_plus(x) >= V0 - 1e-12 || cfg.v_minus(x) >= V0 - 1e-12))
            throw std::invalid_argument("hardy_global: hypothesis V+ >= V0 or V- >= V0 fails on the window");
    }
    HardyCertificate cert;
    cert.kind = HardyCertificate::Kind::global;
    cert.x1_0 = x1_0;
    cert.R = R;
    cert.V0 = V0;
    cert.lambda0 = lambda_tilde(V0, 0.0, ModelConfig{cfg.alpha, cfg.a, {}, {}});
    cert.c = (cert.lambda0 / 16.0) / (cert.lambda0 + 1.0 / 8.0 + 1.0 / (R * R));
    return cert;
}

double subcritical_epsilon(const std::function<double(double)>& w, double w_sup_bound,
                           const HardyCertificate& cert) {
    if (cert.kind != HardyCertificate::Kind::global)
        throw std::invalid_argument("subcritical_epsilon: global certificate required");
    // C'_w = sup |w(x)| (1 + (x1-x1_0)^2); eps0 = c / C'_w
    double cw = 0;
    bool any_negative = false;
    for (int i = 0; i <= 20000; ++i) {
        double x = cert.x1_0 - 100 + 200.0 * i / 20000.0;
        double val = w(x);
        if (val < 0) any_negative = true;
        double d = x - cert.x1_0;
        cw = std::max(cw, std::abs(val) * (1 + d * d));
    }
    cw = std::max(cw, w_sup_bound);
    if (!any_negative) return std::numeric_limits<double>::infinity();
    if (!(cw > 0) || !std::isfinite(cw)) throw numeric_error("subcritical_epsilon: unbounded weight");
    return cert.c / cw;
}

double weyl_residual(const ModelConfig& cfg, int n, double k) {
    cfg.validate();
    if (n < 1) throw std::invalid_argument("weyl_residual: n >= 1");
    const Bump& b = bump();
    double lo = double(n) * n - n, hi = double(n) * n + n;
    double sup_plus = 0, sup_minus = 0;
    for (int i = 0; i <= 10000; ++i) {
        double x = lo + (hi - lo) * i / 10000.0;
        sup_plus = std::max(sup_plus, std::abs(cfg.v_plus(x)));
        sup_minus = std::max(sup_minus, std::abs(cfg.v_minus(x)));
    }
    return b.ddnorm / double(n) / double(n) + 2.0 * std::abs(k) * b.dnorm / double(n) + sup_plus +
           sup_minus;
}

}  // namespace leakyline
