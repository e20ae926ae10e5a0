#ifndef LEAKYLINE_POTENTIALS_HPP
#define LEAKYLINE_POTENTIALS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakyline/common.hpp"

namespace leakyline {

/// Exponential decay certificate: |V(x)| <= K e^{-C|x|}.
struct DecayCertificate {
    double C = 0;
    double K = 0;
};

struct VanishingCheck {
    bool vanishes = false;
    double L = 0;  // smallest tested L with sup_{|x|>L} |V| < tol
};

/// A bounded potential profile on one line: sum of analytic terms
/// (gaussian / box / constant) or a tabulated sample set with linear
/// interpolation, zero outside the tabulated range.
class LinePotential {
public:
    struct Term {
        enum class Kind { gaussian, box, constant, tabulated };
        Kind kind = Kind::constant;
        double depth = 0;   // gaussian/box amplitude
        double center = 0;
        double width = 0;   // gaussian std dev or box half width
        double level = 0;   // constant
        // tabulated: uniform grid x0 + i*dx, values v
        double x0 = 0, dx = 0;
        std::vector<double> values;

        double eval(double x) const;
    };

    LinePotential() = default;  // identically zero

    static LinePotential zero();
    static LinePotential gaussian(double depth, double center, double width);
    static LinePotential box(double depth, double center, double half_width);
    static LinePotential constant(double level);
    /// Tabulated on a strictly increasing uniform grid (checked).
    static LinePotential tabulated(std::span<const double> xs, std::span<const double> vs);

    LinePotential operator+(const LinePotential& other) const;
    LinePotential scaled(double factor) const;

    double operator()(double x) const;
    std::vector<double> sample(std::span<const double> nodes) const;

    double sup_norm() const { return sup_norm_; }
    bool is_zero() const;
    /// Radius beyond which the profile is exactly zero (box/tabulated) or
    /// numerically negligible (gaussian tails below 1e-14 of sup norm).
    double support_radius() const;
    /// True when the profile vanishes identically outside a bounded set
    /// (boxes and tabulated terms only; gaussian tails never qualify).
    bool compactly_supported() const;

    /// Certified (C, K) for analytic profiles; absent for tabulated ones.
    std::optional<DecayCertificate> exponential_decay() const;

    /// Vanishing at infinity in the essential-supremum sense, checked on a
    /// dense grid. Returns the smallest tested L with sup_{|x|>L}|V| < tol.
    VanishingCheck check_vanishing(double tol) const;

    double integral() const;  ///< int V dx (analytic per term, trapezoid for tabulated)

    /// Discontinuity locations (box edges, tabulated range ends), sorted.
    std::vector<double> breakpoints() const;

    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
    double sup_norm_ = 0;

    void refresh_sup_norm();
};

/// Model parameters: coupling alpha > 0 and half line distance a > 0,
/// with the two line potentials.
struct ModelConfig {
    double alpha = 1;
    double a = 1;
    LinePotential v_plus;
    LinePotential v_minus;

    void validate() const;
    bool mirror_symmetric() const;
};

}  // namespace leakyline

#endif
