#include "leakyline/quadrature.hpp"

#include <cmath>

#include "leakyline/transverse.hpp"

namespace leakyline {

GaussRule::GaussRule(int n) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * t * p1 - j * p2) / (j + 1);
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

QuadratureSpec QuadratureSpec::suggested(const ModelConfig& cfg, int n) {
    auto tv = solve_equal(cfg.alpha, cfg.a);
    double sup = std::max(cfg.v_plus.support_radius(), cfg.v_minus.support_radius());
    if (!std::isfinite(sup)) throw numeric_error("QuadratureSpec: potential does not decay");
    QuadratureSpec q;
    q.x_max = std::ceil(sup + 10.0 / tv.kappa0);
    // dyadic spacing so that box edges at dyadic rationals land on cell boundaries
    double j = std::round(std::log2(double(n) / (2.0 * q.x_max)));
    j = std::max(j, 1.0);
    q.n_nodes = int(2.0 * q.x_max * std::pow(2.0, j));
    return q;
}

std::vector<double> QuadratureSpec::nodes() const {
    std::vector<double> xs;
    if (rule == Rule::uniform) {
        double h = spacing();
        xs.resize(n_nodes);
        for (int i = 0; i < n_nodes; ++i) xs[i] = -x_max + (i + 0.5) * h;
    } else {
        int per = 16;
        int panels = std::max(1, n_nodes / per);
        GaussRule gl(per);
        double w = 2 * x_max / panels;
        for (int p = 0; p < panels; ++p) {
            double mid = -x_max + (p + 0.5) * w;
            for (int i = 0; i < per; ++i) xs.push_back(mid + 0.5 * w * gl.x[i]);
        }
    }
    return xs;
}

std::vector<double> QuadratureSpec::weights() const {
    std::vector<double> ws;
    if (rule == Rule::uniform) {
        ws.assign(n_nodes, spacing());
    } else {
        int per = 16;
        int panels = std::max(1, n_nodes / per);
        GaussRule gl(per);
        double w = 2 * x_max / panels;
        for (int p = 0; p < panels; ++p)
            for (int i = 0; i < per; ++i) ws.push_back(0.5 * w * gl.w[i]);
    }
    return ws;
}

}  // namespace leakyline
