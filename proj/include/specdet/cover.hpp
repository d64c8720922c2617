#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "specdet/errors.hpp"

namespace specdet {

using complex_t = std::complex<double>;

inline constexpr double pi_v = 3.14159265358979323846;

namespace detail {
inline constexpr double kEps = 2.220446049250313e-16;
}

/// A point on the universal cover of the punctured plane, stored as
/// (log-modulus, unwound argument).  The argument is not reduced mod 2*pi,
/// so powers with non-integer exponents and sheet bookkeeping stay exact.
struct CoverPoint {
    double log_modulus = 0.0;
    double arg = 0.0;

    friend bool operator==(const CoverPoint&, const CoverPoint&) = default;
};

inline CoverPoint cover_from_polar(double r, double theta) {
    if (!(r > 0.0))
        throw std::domain_error("cover_from_polar: modulus must be positive");
    return CoverPoint{std::log(r), theta};
}

/// Principal-argument lift of a nonzero complex number.
inline CoverPoint cover_from_complex(complex_t z) {
    if (z == complex_t(0.0, 0.0))
        throw std::domain_error("cover_from_complex: zero has no lift");
    return CoverPoint{std::log(std::abs(z)), std::arg(z)};
}

inline complex_t cover_project(const CoverPoint& z) {
    double m = std::exp(z.log_modulus);
    return complex_t(m * std::cos(z.arg), m * std::sin(z.arg));
}

inline double cover_abs(const CoverPoint& z) { return std::exp(z.log_modulus); }

/// log z as a complex number, with the unwound argument as imaginary part.
inline complex_t cover_log(const CoverPoint& z) {
    return complex_t(z.log_modulus, z.arg);
}

inline CoverPoint cover_pow(const CoverPoint& z, double a) {
    return CoverPoint{a * z.log_modulus, a * z.arg};
}

/// z^a for complex exponent, projected back to the plane.
inline complex_t cover_pow_c(const CoverPoint& z, complex_t a) {
    return std::exp(a * cover_log(z));
}

inline CoverPoint cover_mul(const CoverPoint& a, const CoverPoint& b) {
    return CoverPoint{a.log_modulus + b.log_modulus, a.arg + b.arg};
}

inline CoverPoint cover_scale(const CoverPoint& z, double r) {
    if (!(r > 0.0))
        throw std::domain_error("cover_scale: factor must be positive");
    return CoverPoint{z.log_modulus + std::log(r), z.arg};
}

/// Rotation by m half-turns of the cover symmetry, arg += m*pi/(alpha+1).
/// The increment is computed as pi*(m/(alpha+1)) so that rotating by m and
/// then by -m restores the argument bit-for-bit.
inline CoverPoint cover_rotate(const CoverPoint& z, int m, double alpha) {
    if (!(alpha > 0.0))
        throw std::domain_error("cover_rotate: alpha must be positive");
    return CoverPoint{z.log_modulus,
                      z.arg + pi_v * (static_cast<double>(m) / (alpha + 1.0))};
}

} // namespace specdet
