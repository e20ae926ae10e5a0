#include "leakyline/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>

#include "leakyline/transverse.hpp"

namespace leakyline {

namespace {

void check_aligned(double a, double h) {
    double ratio = a / h;
    if (std::abs(ratio - std::lround(ratio)) > 1e-12 * std::max(1.0, ratio))
        throw std::invalid_argument("oracle: a/h must be an integer (grid alignment)");
}

// eigenvalue count below x for a symmetric tridiagonal (Sturm sequence)
int sturm_count(const std::vector<double>& diag, double off, double x) {
    int cnt = 0;
    double q = diag[0] - x;
    if (q < 0) ++cnt;
    for (size_t i = 1; i < diag.size(); ++i) {
        double denom = std::abs(q) < 1e-300 ? (q < 0 ? -1e-300 : 1e-300) : q;
        q = diag[i] - x - off * off / denom;
        if (q < 0) ++cnt;
    }
    return cnt;
}

}  // namespace

std::vector<double> fd_transverse_single(double beta_plus, double beta_minus, double a, double L2,
                                         double h, int k) {
    check_aligned(a, h);
    int n = int(std::lround(2 * L2 / h)) - 1;
    if (n < 3) throw std::invalid_argument("fd_transverse: grid too small");
    std::vector<double> diag(n, 2.0 / (h * h));
    int ip = -1, im = -1;
    for (int i = 0; i < n; ++i) {
        double x = -L2 + (i + 1) * h;
        if (std::abs(x - a) < h / 2) ip = i;
        if (std::abs(x + a) < h / 2) im = i;
    }
    diag[ip] -= beta_plus / h;
    diag[im] -= beta_minus / h;
    double off = -1.0 / (h * h);

    std::vector<double> out;
    double lo = -2.0 * (beta_plus * beta_plus + beta_minus * beta_minus + 1.0), hi = 1.0;
    for (int j = 1; j <= k; ++j) {
        double l = lo, r = hi;
        for (int it = 0; it < 120; ++it) {
            double m = 0.5 * (l + r);
            if (sturm_count(diag, off, m) >= j) r = m; else l = m;
        }
        out.push_back(0.5 * (l + r));
    }
    return out;
}

FdResult fd_transverse(double beta_plus, double beta_minus, double a, double L2, double h, int k) {
    FdResult res;
    res.h = h;
    res.coarse = fd_transverse_single(beta_plus, beta_minus, a, L2, h, k);
    res.fine = fd_transverse_single(beta_plus, beta_minus, a, L2, h / 2, k);
    res.eigenvalues.resize(k);
    res.errbar = 0;
    for (int i = 0; i < k; ++i) {
        res.eigenvalues[i] = 2 * res.fine[i] - res.coarse[i];
        res.errbar = std::max(res.errbar, std::abs(res.fine[i] - res.coarse[i]));
    }
    return res;
}

std::vector<double> fd_2d_single(const ModelConfig& cfg, const Fd2dOptions& opt) {
    cfg.validate();
    const double h = opt.h;
    check_aligned(cfg.a, h);
    const int n1 = int(std::lround(2 * opt.L1 / h)) - 1;
    const int n2 = opt.halfplane_odd ? int(std::lround(opt.L2 / h)) - 1
                                     : int(std::lround(2 * opt.L2 / h)) - 1;
    if (n1 < 3 || n2 < 3) throw std::invalid_argument("fd_2d: grid too small");
    const long N = long(n1) * n2;

    auto x1_of = [&](int i) { return -opt.L1 + (i + 1) * h; };
    auto x2_of = [&](int j) { return opt.halfplane_odd ? (j + 1) * h : -opt.L2 + (j + 1) * h; };

    int jp = -1, jm = -1;
    for (int j = 0; j < n2; ++j) {
        if (std::abs(x2_of(j) - cfg.a) < h / 2) jp = j;
        if (!opt.halfplane_odd && std::abs(x2_of(j) + cfg.a) < h / 2) jm = j;
    }
    if (jp < 0) throw numeric_error("fd_2d: +a row not inside the box");

    // shift below the spectrum bottom so A - sigma I is positive definite
    auto tv = solve_equal(cfg.alpha, cfg.a);
    double vmax = std::max(cfg.v_plus.sup_norm(), cfg.v_minus.sup_norm());
    double bulk_max = 0;
    if (opt.bulk)
        for (int i = 0; i < n1; i += std::max(1, n1 / 256))
            for (int j = 0; j < n2; j += std::max(1, n2 / 256))
                bulk_max = std::max(bulk_max, std::abs(opt.bulk(x1_of(i), x2_of(j))));
    double sigma = tv.xi0 - 2.0 - 2.0 * vmax - bulk_max;

    Eigen::SparseMatrix<double> A(N, N);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(5 * N));
    const double inv_h2 = 1.0 / (h * h);
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            long id = long(j) * n1 + i;
            double d = 4.0 * inv_h2 - sigma;
            if (j == jp) d += (cfg.v_plus(x1_of(i)) - cfg.alpha) / h;
            if (j == jm) d += (cfg.v_minus(x1_of(i)) - cfg.alpha) / h;
            if (opt.bulk) d += opt.bulk(x1_of(i), x2_of(j));
            trip.emplace_back(id, id, d);
            if (i + 1 < n1) {
                trip.emplace_back(id, id + 1, -inv_h2);
                trip.emplace_back(id + 1, id, -inv_h2);
            }
            if (j + 1 < n2) {
                trip.emplace_back(id, id + n1, -inv_h2);
                trip.emplace_back(id + n1, id, -inv_h2);
            }
        }
    }
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(A);
    if (solver.info() != Eigen::Success) throw numeric_error("fd_2d: factorization failed");

    // shift-invert Lanczos with full reorthogonalization
    const int want = std::max(1, opt.n_eigs);
    const int mmax = std::min<long>(opt.max_lanczos, N - 2);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
    // deterministic pseudo-random start
    uint64_t state = 88172645463325252ull;
    for (long i = 0; i < N; ++i) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        v[i] = double(state % 10007) / 10007.0 - 0.5;
    }
    v.normalize();
    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha_c, beta_c;
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(N);
    double beta_last = 0;
    std::vector<double> theta, theta_prev;
    for (int m = 0; m < mmax; ++m) {
        basis.push_back(v);
        Eigen::VectorXd w = solver.solve(v);
        double al = v.dot(w);
        alpha_c.push_back(al);
        w -= al * v;
        if (m > 0) w -= beta_last * prev;
        for (const auto& b : basis) w -= b.dot(w) * b;  // full reorthogonalization
        double bn = w.norm();
        // Ritz values of the tridiagonal section
        int mm = int(alpha_c.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(mm, mm);
        for (int i = 0; i < mm; ++i) {
            T(i, i) = alpha_c[i];
            if (i + 1 < mm) T(i, i + 1) = T(i + 1, i) = beta_c[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
        theta.assign(es.eigenvalues().data(), es.eigenvalues().data() + mm);
        std::sort(theta.rbegin(), theta.rend());  // largest of (A - sigma)^{-1}
        bool conv = false;
        if (mm > want + 2 && int(theta_prev.size()) >= want) {
            conv = true;
            for (int i = 0; i < want; ++i)
                if (std::abs(theta[i] - theta_prev[i]) > 1e-11 * std::abs(theta[i])) conv = false;
        }
        theta_prev = theta;
        if (conv || bn < 1e-12) break;
        beta_c.push_back(bn);
        beta_last = bn;
        prev = basis.back();
        v = w / bn;
    }
    std::vector<double> out;
    for (int i = 0; i < std::min<int>(want, int(theta.size())); ++i) {
        double ev = sigma + 1.0 / theta[i];
        if (opt.eig_ceiling == 0 || ev < opt.eig_ceiling) out.push_back(ev);
    }
    std::sort(out.begin(), out.end());
    return out;
}

FdResult fd_2d(const ModelConfig& cfg, const Fd2dOptions& opt) {
    FdResult res;
    res.h = opt.h;
    Fd2dOptions fineopt = opt;
    fineopt.h = opt.h / 2;
    res.coarse = fd_2d_single(cfg, opt);
    res.fine = fd_2d_single(cfg, fineopt);
    size_t k = std::min(res.coarse.size(), res.fine.size());
    res.eigenvalues.resize(k);
    res.errbar = 0;
    for (size_t i = 0; i < k; ++i) {
        res.eigenvalues[i] = 2 * res.fine[i] - res.coarse[i];
        res.errbar = std::max(res.errbar, std::abs(res.fine[i] - res.coarse[i]));
    }
    return res;
}

}  // namespace leakyline
