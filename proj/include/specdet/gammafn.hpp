#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace specdet {

namespace detail {

// Lanczos approximation, g = 7, 9 coefficients.  Good to ~1e-13 relative
// on the strip we use (|Im z| up to a few hundred is not needed here).
inline constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline std::complex<double> gamma_positive_half(std::complex<double> z) {
    // valid for Re z > 0.5 after the caller's reflection step
    z -= 1.0;
    std::complex<double> a = lanczos_c[0];
    for (int k = 1; k < 9; ++k)
        a += lanczos_c[k] / (z + static_cast<double>(k));
    std::complex<double> t = z + 7.5;
    const double sqrt_two_pi = 2.5066282746310002;
    return sqrt_two_pi * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

} // namespace detail

inline std::complex<double> gamma_fn(std::complex<double> z) {
    const double pi = 3.14159265358979323846;
    if (z.real() < 0.5) {
        // reflection; sin(pi z) handles the poles at nonpositive integers
        return pi / (std::sin(pi * z) * detail::gamma_positive_half(1.0 - z));
    }
    return detail::gamma_positive_half(z);
}

inline double gamma_fn(double x) { return gamma_fn(std::complex<double>(x, 0.0)).real(); }

/// Reciprocal gamma; entire, finite at the poles of gamma.
inline std::complex<double> rgamma_fn(std::complex<double> z) {
    const double pi = 3.14159265358979323846;
    if (z.real() < 0.5)
        return std::sin(pi * z) * detail::gamma_positive_half(1.0 - z) / pi;
    return 1.0 / detail::gamma_positive_half(z);
}

/// digamma at a positive integer: psi(n) = -gamma + sum_{k<n} 1/k.
inline double digamma_int(int n) {
    const double euler_gamma = 0.57721566490153286061;
    double s = -euler_gamma;
    for (int k = 1; k < n; ++k)
        s += 1.0 / k;
    return s;
}

/// Pochhammer (a)_n by direct product.
inline std::complex<double> pochhammer(std::complex<double> a, int n) {
    std::complex<double> p = 1.0;
    for (int k = 0; k < n; ++k)
        p *= a + static_cast<double>(k);
    return p;
}

} // namespace specdet
