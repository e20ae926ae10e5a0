#include "leakyline/transverse.hpp"

#include <algorithm>
#include <cmath>

#include "leakyline/rootfind.hpp"

namespace leakyline {

double TransverseEigenfunction::operator()(double x) const {
    double ax = std::abs(x);
    if (ax <= a) return even ? inner * std::cosh(kappa * x) : inner * std::sinh(kappa * x);
    double tail = outer * std::exp(-kappa * (ax - a));
    if (even) return tail;
    return x > 0 ? tail : -tail;
}

double TransverseEigenfunction::derivative(double x) const {
    double ax = std::abs(x);
    if (ax < a) return even ? inner * kappa * std::sinh(kappa * x) : inner * kappa * std::cosh(kappa * x);
    double tail = -kappa * outer * std::exp(-kappa * (ax - a));
    if (even) return x > 0 ? tail : -tail;
    return tail;  // odd branch: derivative is even
}

double TransverseEigenfunction::norm_sq() const {
    double k = kappa;
    double inside;
    if (even)
        inside = 2 * (a / 2 + std::sinh(2 * k * a) / (4 * k));
    else
        inside = 2 * (std::sinh(2 * k * a) / (4 * k) - a / 2);
    double outside = 2 * (outer * outer) / (2 * k) / (inner * inner);
    return inner * inner * (inside + outside);
}

double TransverseEigenfunction::grad_norm_sq() const {
    double k = kappa;
    double sh2 = std::sinh(2 * k * a);
    double inside;
    if (even)
        inside = inner * inner * k * (0.5 * sh2 - k * a);  // int (c k sinh)^2
    else
        inside = inner * inner * k * (0.5 * sh2 + k * a);  // int (c k cosh)^2
    double outside = outer * outer * k;  // two exponential tails
    return inside + outside;
}

double TransverseSpectrum::secular_residual(double kappa) const {
    double lhs = alpha * alpha / 4 * std::exp(-4 * kappa * a);
    double rhs = (kappa - alpha / 2) * (kappa - alpha / 2);
    return std::abs(lhs - rhs);
}

namespace {

TransverseEigenfunction build_eigenfunction(double kappa, double a, bool even) {
    TransverseEigenfunction f;
    f.kappa = kappa;
    f.a = a;
    f.even = even;
    f.inner = 1.0;
    f.outer = even ? std::cosh(kappa * a) : std::sinh(kappa * a);
    double n = std::sqrt(f.norm_sq());
    f.inner /= n;
    f.outer /= n;
    return f;
}

}  // namespace

TransverseSpectrum solve_equal(double alpha, double a) {
    if (!(alpha > 0) || !(a > 0)) throw std::invalid_argument("solve_equal: alpha, a must be positive");
    TransverseSpectrum out;
    out.alpha = alpha;
    out.a = a;

    // ground state: unique root of 2k = alpha (1 + e^{-2ka}) on (alpha/2, alpha];
    // f(alpha/2) = -alpha e^{-alpha a} <= 0 (0 at underflow, where kappa0 = alpha/2)
    auto feven = [&](double k) { return 2 * k - alpha * (1 + std::exp(-2 * k * a)); };
    out.kappa0 = bisect_newton(feven, alpha / 2, alpha + 1e-12);
    out.xi0 = -out.kappa0 * out.kappa0;
    out.phi0 = build_eigenfunction(out.kappa0, a, true);

    if (alpha * a > 1) {
        // excited state: unique root of 2k = alpha (1 - e^{-2ka}) on (0, alpha/2);
        // the difference dips below zero at k* = ln(alpha a)/(2a) and recovers.
        auto fodd = [&](double k) { return alpha / 2 * std::exp(-2 * k * a) - (alpha / 2 - k); };
        double kstar = std::log(alpha * a) / (2 * a);
        double k1 = bisect_newton(fodd, kstar, alpha / 2);
        out.kappa1 = k1;
        out.xi1 = -k1 * k1;
        out.phi1 = build_eigenfunction(k1, a, false);
    }
    return out;
}

std::vector<GeneralBoundState> solve_general(double beta_plus, double beta_minus, double a) {
    if (!(a > 0)) throw std::invalid_argument("solve_general: a must be positive");
    std::vector<GeneralBoundState> out;
    if (beta_plus <= 0 && beta_minus <= 0) return out;  // both non-attractive

    // single-interaction degenerate cases (the matching derivation divides by beta)
    if (beta_plus == 0 || beta_minus == 0) {
        double b = beta_plus == 0 ? beta_minus : beta_plus;
        if (b > 0) {
            GeneralBoundState s;
            s.kappa = b / 2;
            s.energy = -s.kappa * s.kappa;
            bool on_plus = (beta_minus == 0);
            double c = on_plus ? a : -a;  // location of the sole interaction
            // psi = e^{-kappa|x-c|}; fill the piecewise coefficients
            s.B = std::exp(-s.kappa * c);   // for x<c branch e^{kappa(x-c)} = B e^{kappa x}
            s.C = std::exp(s.kappa * c);    // for x>c branch
            s.A = s.B * std::exp(-s.kappa * a);
            s.D = s.C * std::exp(-s.kappa * a);
            out.push_back(s);
        }
        return out;
    }

    double bmax = std::max({std::abs(beta_plus), std::abs(beta_minus), 1.0});
    auto F = [&](double k) {
        return (2 * k - beta_plus) * (2 * k - beta_minus) -
               beta_plus * beta_minus * std::exp(-4 * k * a);
    };
    // All roots satisfy 2k <= max(beta) + 1 in the attractive regime; detect
    // sign changes at step 1e-4 in the rescaled variable, then refine.
    double k_hi = bmax + 1.0;
    double step = 1e-4 * bmax;
    double prev = F(step);
    std::vector<double> roots;
    for (double k = 2 * step; k <= k_hi; k += step) {
        double cur = F(k);
        if (prev == 0) roots.push_back(k - step);
        else if ((prev < 0) != (cur < 0))
            roots.push_back(bisect_newton(F, k - step, k));
        prev = cur;
    }
    // dedupe near-coalescent roots (tangency reported once)
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double x, double y) { return std::abs(x - y) < 1e-9 * bmax; }),
                roots.end());

    for (double k : roots) {
        GeneralBoundState s;
        s.kappa = k;
        s.energy = -k * k;
        // matching coefficients: B e^{-ka} beta- = C e^{ka} (2k - beta-)
        // pick B = 1 unless degenerate, then recover A, D by continuity
        double B = 1.0, C;
        double denom = beta_plus;
        C = B * std::exp(2 * k * a) * (2 * k - beta_plus) / denom;
        // consistency with the -a matching is automatic at F(k)=0
        s.B = B;
        s.C = C;
        s.A = (B * std::exp(-k * a) + C * std::exp(k * a));
        s.D = (B * std::exp(k * a) + C * std::exp(-k * a));
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(),
              [](const GeneralBoundState& x, const GeneralBoundState& y) { return x.kappa > y.kappa; });
    return out;
}

double lambda_tilde(double v_plus, double v_minus, const TransverseSpectrum& tv) {
    auto states = solve_general(tv.alpha - v_plus, tv.alpha - v_minus, tv.a);
    double lowest = states.empty() ? 0.0 : states.front().energy;
    return lowest - tv.xi0;
}

double lambda_tilde(double v_plus, double v_minus, const ModelConfig& cfg) {
    return lambda_tilde(v_plus, v_minus, solve_equal(cfg.alpha, cfg.a));
}

std::vector<double> lambda_field(const ModelConfig& cfg, std::span<const double> nodes) {
    auto tv = solve_equal(cfg.alpha, cfg.a);
    std::vector<double> out(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        out[i] = lambda_tilde(cfg.v_plus(nodes[i]), cfg.v_minus(nodes[i]), tv);
    return out;
}

DirichletHalfline dirichlet_halfline(double alpha, double a) {
    auto tv = solve_equal(alpha, a);
    DirichletHalfline d;
    d.xi1 = tv.xi1;
    d.mu0 = tv.mu0();
    return d;
}

}  // namespace leakyline
