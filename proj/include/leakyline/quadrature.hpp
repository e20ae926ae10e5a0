#ifndef LEAKYLINE_QUADRATURE_HPP
#define LEAKYLINE_QUADRATURE_HPP

#include <vector>

#include "leakyline/common.hpp"
#include "leakyline/potentials.hpp"

namespace leakyline {

/// Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre recurrence).
struct GaussRule {
    std::vector<double> x, w;
    explicit GaussRule(int n);
};

/// Quadrature layout on the line for the Birman-Schwinger discretization.
/// The uniform rule places nodes at cell midpoints (weights h); the
/// gauss_panels rule tiles [-x_max, x_max] with 16-point panels.
struct QuadratureSpec {
    double x_max = 12.0;
    int n_nodes = 512;
    enum class Rule { uniform, gauss_panels };
    Rule rule = Rule::uniform;

    /// x_max = support radius + 10/kappa0, n aligned so box edges land on
    /// cell boundaries where possible.
    static QuadratureSpec suggested(const ModelConfig& cfg, int n = 512);

    std::vector<double> nodes() const;
    std::vector<double> weights() const;
    double spacing() const { return 2.0 * x_max / n_nodes; }
};

}  // namespace leakyline

#endif
