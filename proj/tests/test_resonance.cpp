#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "leakyline/resonance.hpp"

using namespace leakyline;

namespace {

ResonanceSolver make_solver() {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    cfg.v_plus = LinePotential::box(-0.2, 0, 1);
    cfg.v_minus = cfg.v_plus;
    QuadratureSpec q;
    q.x_max = 5;
    q.n_nodes = 160;
    return ResonanceSolver(cfg, LinePotential::box(1.0, 0, 1), q);
}

}  // namespace

TEST_CASE("gamma_II at eps = 0 is the identity") {
    auto rs = make_solver();
    const auto& tv = rs.birman().transverse();
    SheetedEnergy z(cplx(0.5 * (tv.xi0 + tv.mu0()), -1e-3), Sheet::second);
    auto G = rs.gamma_II(z, 0.0);
    CHECK((G - Eigen::MatrixXcd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mirror resolvent with V0 = 0 reduces to the line kernel block") {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    QuadratureSpec q;
    q.x_max = 4;
    q.n_nodes = 64;
    ResonanceSolver rs(cfg, LinePotential::box(1.0, 0, 1), q);
    SheetedEnergy z(cplx(-3.0, 0.0));
    auto R = rs.mirror_resolvent_pp(z);
    auto d = discretize_line_kernel(rs.birman().kernel(), z, q);
    CHECK((R - d.same_matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("mirror resolvent is real symmetric below the spectrum") {
    auto rs = make_solver();
    const auto& tv = rs.birman().transverse();
    auto R = rs.mirror_resolvent_pp(SheetedEnergy(cplx(tv.xi0 - 0.7, 0.0)));
    CHECK(R.imag().cwiseAbs().maxCoeff() < 1e-11);
    CHECK((R - R.transpose()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("spectral projector is rank one and matches the eigen trace") {
    auto rs = make_solver();
    const auto& st = rs.embedded();
    auto P = rs.spectral_projector(st);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P);
    auto sv = svd.singularValues();
    CHECK(sv[1] < 1e-6 * sv[0]);
    // P acts as omega (omega, .)_h: compare against h * trace trace^T
    const double h = 10.0 / 160.0;
    Eigen::VectorXd w(st.trace.size());
    for (size_t i = 0; i < st.trace.size(); ++i) w[i] = st.trace[i];
    Eigen::MatrixXcd expect = (h * w * w.transpose()).cast<cplx>();
    CHECK((P - expect).cwiseAbs().maxCoeff() < 1e-4 * sv[0]);
}

TEST_CASE("perturbative coefficients: orthogonal perturbant and FGR sign") {
    auto rs = make_solver();
    const auto& st = rs.embedded();
    auto pc = rs.perturbative_coefficients(st);
    CHECK(pc.gamma_i <= 0.0);
    CHECK(pc.ladder_converged);
    // the linear shift is the V_p-weighted square of the trace
    double h = 10.0 / 160.0, direct = 0;
    for (size_t i = 0; i < st.trace.size(); ++i) {
        double x = -5 + (i + 0.5) * h;
        direct += (std::abs(x) <= 1 ? 1.0 : 0.0) * st.trace[i] * st.trace[i];
    }
    direct *= h;
    CHECK(pc.linear_shift == doctest::Approx(direct).epsilon(1e-12));

    // odd perturbant in x1 kills the linear shift (trace is even)
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    cfg.v_plus = LinePotential::box(-0.2, 0, 1);
    cfg.v_minus = cfg.v_plus;
    QuadratureSpec q;
    q.x_max = 5;
    q.n_nodes = 160;
    auto vodd = LinePotential::box(1.0, 0.5, 0.5) + LinePotential::box(-1.0, -0.5, 0.5);
    ResonanceSolver rodd(cfg, vodd, q);
    auto pco = rodd.perturbative_coefficients(rodd.embedded());
    CHECK(std::abs(pco.linear_shift) < 1e-10);
}

TEST_CASE("pole location: small eps limit and width positivity") {
    auto rs = make_solver();
    const auto& st = rs.embedded();
    auto pole = rs.find_pole(st, 1e-3);
    CHECK(pole.z.imag() <= 0.0);
    CHECK(pole.width >= 0.0);
    CHECK(std::abs(pole.z.real() - st.nu) < 2e-3);
    // eps -> 0: z_k -> nu + eps*shift + O(eps^2)
    auto tiny = rs.find_pole(st, 1e-5);
    CHECK(std::abs(tiny.z - cplx(st.nu + 1e-5 * tiny.linear_shift, 0)) < 1e-9);
    CHECK(std::abs(tiny.z - cplx(st.nu, 0)) < 1e-5);
    // width quadruples when eps doubles
    auto p2 = rs.find_pole(st, 2e-3);
    CHECK(p2.width / pole.width == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("Gamma_II coincides with the first-sheet Gamma in the upper half plane") {
    auto rs = make_solver();
    const auto& tv = rs.birman().transverse();
    cplx z(0.5 * (tv.xi0 + tv.mu0()), 1e-3);
    double eps = 1e-2;
    auto G2 = rs.gamma_II(ResonanceSolver::continued(z), eps);
    auto G1 = rs.gamma_II(SheetedEnergy(z, Sheet::first), eps);
    CHECK((G2 - G1).cwiseAbs().maxCoeff() == 0.0);
    // and below the axis the sheets genuinely differ
    cplx zm = std::conj(z);
    auto Gd = rs.gamma_II(ResonanceSolver::continued(zm), eps);
    auto Gf = rs.gamma_II(SheetedEnergy(zm, Sheet::first), eps);
    CHECK((Gd - Gf).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("det Gamma_II vanishes at the located pole") {
    auto rs = make_solver();
    const auto& st = rs.embedded();
    double eps = 1e-2;
    auto pole = rs.find_pole(st, eps);
    auto G = rs.gamma_II(ResonanceSolver::continued(pole.z), eps);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
    auto sv = svd.singularValues();
    CHECK(sv[sv.size() - 1] < 1e-7 * sv[0]);
}

TEST_CASE("linear shift law and FGR cross-validation") {
    auto rs = make_solver();
    const auto& st = rs.embedded();
    auto p3 = rs.find_pole(st, 1e-3);
    double ratio = (p3.z.real() - st.nu) / (1e-3 * p3.linear_shift);
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.01));
    auto p2 = rs.find_pole(st, 1e-2);
    double fgr = -2.0 * 1e-4 * p2.gamma_i;
    CHECK(p2.width == doctest::Approx(fgr).epsilon(0.05));
}

TEST_CASE("gaussian profiles: finite continuation strip enforced") {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.a = 1;
    cfg.v_plus = LinePotential::gaussian(-0.18, 0, 0.6);
    cfg.v_minus = cfg.v_plus;
    QuadratureSpec q;
    q.x_max = 6;
    q.n_nodes = 192;
    ResonanceSolver rs(cfg, LinePotential::gaussian(1.0, 0, 0.8), q);
    // certified decay C = 1 for gaussians: strip bound C/2 = 0.5
    CHECK(rs.strip_bound() == doctest::Approx(0.5));
    const auto& st = rs.embedded();
    auto pole = rs.find_pole(st, 1e-2);
    CHECK(pole.z.imag() <= 0);
    CHECK(pole.gamma_i <= 0);
    double fgr = -2.0 * 1e-4 * pole.gamma_i;
    CHECK(pole.width == doctest::Approx(fgr).epsilon(0.05));
    // far below the axis the second-sheet tau0 leaves the certified strip
    const auto& tv = rs.birman().transverse();
    cplx deep(0.5 * (tv.xi0 + tv.mu0()), -0.9);
    CHECK_THROWS_AS(rs.gamma_II(ResonanceSolver::continued(deep), 1e-2), numeric_error);
}

TEST_CASE("width scaling exponent over two decades") {
    auto rs = make_solver();
    const auto& st = rs.embedded();
    auto fit = rs.width_scaling(st, {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1});
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::abs(fit.shift_ratio - 1.0) < 0.02);
    CHECK(fit.fgr_ratio == doctest::Approx(1.0).epsilon(0.05));
    // pole trajectory is continuous: no branch jumps between grid points
    for (size_t i = 1; i < fit.poles.size(); ++i) {
        CHECK(std::abs(fit.poles[i].z - fit.poles[i - 1].z) <
              0.5 * std::abs(fit.poles[i].epsilon - fit.poles[i - 1].epsilon) *
                      (std::abs(fit.poles[i].linear_shift) + 1.0) +
                  0.05);
    }
}
