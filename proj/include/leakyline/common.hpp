#ifndef LEAKYLINE_COMMON_HPP
#define LEAKYLINE_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace leakyline {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double euler_gamma = 0.577215664901532860606512090082402431;

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Signed square root: sgn(v) * sqrt(|v|), so that v^{1/2} * |v|^{1/2} == v.
inline double signed_sqrt(double v) {
    return v >= 0 ? std::sqrt(v) : -std::sqrt(-v);
}

}  // namespace leakyline

#endif
