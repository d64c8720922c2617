#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "specdet/bessel.hpp"
#include "specdet/errors.hpp"
#include "specdet/gammafn.hpp"

namespace specdet {

enum class AiryKind { Ai, Bi, dAi, dBi };

struct AiryEval {
    complex_t value{};
    double abs_error = 0.0;
};

namespace detail {

// Maclaurin sums via the classical f/g pair: f'' = z f with f(0)=1, f'(0)=0
// and g(0)=0, g'(0)=1.  Term recurrences never overflow separately.
struct AiryTaylorSums {
    complex_t f, g, df, dg;
    double max_term;   // largest term magnitude across the four sums
    double last_term;  // magnitude of the final increment
    int terms;
};

inline AiryTaylorSums airy_fg(complex_t z, double tol) {
    complex_t z3 = z * z * z;
    complex_t tf = 1.0, tg = z, tdf = 0.5 * z * z, tdg = 1.0;
    complex_t f = 0.0, g = 0.0, df = 0.0, dg = 0.0;
    double max_term = 1.0, last = 1.0;
    int k = 0;
    for (; k < 600; ++k) {
        f += tf;
        g += tg;
        df += tdf;
        dg += tdg;
        double m = std::max({std::abs(tf), std::abs(tg), std::abs(tdf), std::abs(tdg)});
        max_term = std::max(max_term, m);
        last = m;
        double floor_scale =
            std::max({1.0, std::abs(f), std::abs(g), std::abs(df), std::abs(dg)});
        if (k > 3 && m < tol * floor_scale * 1e-3)
            break;
        double a = 3.0 * k;
        tf *= z3 / ((a + 2.0) * (a + 3.0));
        tg *= z3 / ((a + 3.0) * (a + 4.0));
        tdf *= z3 * ((k + 2.0) / (k + 1.0)) / ((a + 5.0) * (a + 6.0));
        tdg *= z3 / ((a + 1.0) * (a + 3.0));
    }
    return AiryTaylorSums{f, g, df, dg, max_term, last, k};
}

inline AiryEval airy_taylor_any(AiryKind which, complex_t z, double tol) {
    AiryTaylorSums s = airy_fg(z, tol);
    double c1 = std::pow(3.0, -2.0 / 3.0) / gamma_fn(2.0 / 3.0);
    double c2 = std::pow(3.0, -1.0 / 3.0) / gamma_fn(1.0 / 3.0);
    const double sqrt3 = 1.7320508075688772;
    complex_t v;
    switch (which) {
    case AiryKind::Ai: v = c1 * s.f - c2 * s.g; break;
    case AiryKind::Bi: v = sqrt3 * (c1 * s.f + c2 * s.g); break;
    case AiryKind::dAi: v = c1 * s.df - c2 * s.dg; break;
    case AiryKind::dBi: v = sqrt3 * (c1 * s.df + c2 * s.dg); break;
    }
    double err = 8.0 * s.last_term +
                 6.0 * kEps * s.max_term * std::sqrt(s.terms + 2.0);
    return AiryEval{v, err};
}

// remainder bound of the one-term exponential representation, by sector
inline double airy_r1_bound(complex_t z) {
    double zeta = std::abs((2.0 / 3.0) * std::pow(z, 1.5));
    if (zeta == 0.0)
        return std::numeric_limits<double>::infinity();
    double base = (5.0 / 72.0) / zeta;
    double a = std::abs(std::arg(z));
    const double edge = 1e-12;
    double cap = 1.0 + 7.0 * std::sqrt(pi_v) * gamma_fn(7.0 / 12.0) / gamma_fn(1.0 / 12.0);
    if (a < pi_v / 3.0 - edge)
        return base;
    double b2 = base * std::max(std::abs(1.0 / std::sin(1.5 * a)), cap);
    if (a < pi_v / 3.0 + edge)
        return std::max(base, b2);
    if (a < 2.0 * pi_v / 3.0 - edge)
        return b2;
    double c = std::abs(std::cos(1.5 * a));
    double b3 = (c > 0.0) ? base * std::sqrt(7.0 * pi_v) / (std::sqrt(3.0) * std::pow(c, 7.0 / 6.0)) * cap
                          : std::numeric_limits<double>::infinity();
    if (a < 2.0 * pi_v / 3.0 + edge)
        return std::max(b2, b3);
    return b3;
}

// same shape of bound table for the derivative remainder P1
inline double airy_p1_bound(complex_t z) {
    double zeta = std::abs((2.0 / 3.0) * std::pow(z, 1.5));
    if (zeta == 0.0)
        return std::numeric_limits<double>::infinity();
    double base = (5.0 / 72.0) / zeta;
    double a = std::abs(std::arg(z));
    const double edge = 1e-12;
    if (a < pi_v / 3.0 - edge)
        return base;
    double b2 = base * std::max(std::abs(1.0 / std::sin(1.5 * a)), 1.0 + 0.5 * pi_v);
    if (a < pi_v / 3.0 + edge)
        return std::max(base, b2);
    if (a < 2.0 * pi_v / 3.0 - edge)
        return b2;
    double c = std::abs(std::cos(1.5 * a));
    double b3 = (c > 0.0) ? base * (std::sqrt(2.0 * pi_v) / c + 0.5 * pi_v + 1.0)
                          : std::numeric_limits<double>::infinity();
    if (a < 2.0 * pi_v / 3.0 + edge)
        return std::max(b2, b3);
    return b3;
}

inline AiryEval airy_asymptotic(AiryKind which, complex_t z) {
    const complex_t i(0.0, 1.0);
    double argz = std::arg(z);
    complex_t zeta = (2.0 / 3.0) * std::pow(z, 1.5);

    auto bad = [] {
        return AiryEval{complex_t(0.0), std::numeric_limits<double>::infinity()};
    };

    switch (which) {
    case AiryKind::Ai: {
        if (std::abs(argz) < pi_v - 1e-9) {
            complex_t v = std::exp(-zeta) / (2.0 * std::sqrt(pi_v) * std::pow(z, 0.25));
            double b = airy_r1_bound(z);
            return AiryEval{v, std::abs(v) * b};
        }
        // oscillatory side: z = -w
        complex_t w = -z;
        if (std::abs(std::arg(w)) < 2.0 * pi_v / 3.0 - 1e-9) {
            complex_t zw = (2.0 / 3.0) * std::pow(w, 1.5);
            complex_t amp = 1.0 / (std::sqrt(pi_v) * std::pow(w, 0.25));
            complex_t v = amp * std::cos(zw - 0.25 * pi_v);
            double b1 = airy_r1_bound(w * std::exp(i * pi_v / 3.0));
            double b2 = airy_r1_bound(w * std::exp(-i * pi_v / 3.0));
            double grow = std::exp(std::abs(zw.imag()));
            return AiryEval{v, std::abs(amp) * 0.5 * grow * (b1 + b2)};
        }
        return bad();
    }
    case AiryKind::Bi: {
        if (std::abs(argz) < pi_v / 3.0 - 1e-9) {
            complex_t v = std::exp(zeta) / (std::sqrt(pi_v) * std::pow(z, 0.25));
            double b = 0.5 * (airy_r1_bound(z * std::exp(-2.0 * i * pi_v / 3.0)) +
                              airy_r1_bound(z * std::exp(2.0 * i * pi_v / 3.0)));
            return AiryEval{v, std::abs(v) * b};
        }
        complex_t w = -z;
        if (std::abs(std::arg(w)) < 2.0 * pi_v / 3.0 - 1e-9) {
            complex_t zw = (2.0 / 3.0) * std::pow(w, 1.5);
            complex_t amp = 1.0 / (std::sqrt(pi_v) * std::pow(w, 0.25));
            complex_t v = -amp * std::sin(zw - 0.25 * pi_v);
            double b1 = airy_r1_bound(w * std::exp(i * pi_v / 3.0));
            double b2 = airy_r1_bound(w * std::exp(-i * pi_v / 3.0));
            double grow = std::exp(std::abs(zw.imag()));
            return AiryEval{v, std::abs(amp) * 0.5 * grow * (b1 + b2)};
        }
        // connection through rotated Ai covers the remaining sector
        complex_t zp = z * std::exp(2.0 * i * pi_v / 3.0);
        complex_t zm = z * std::exp(-2.0 * i * pi_v / 3.0);
        AiryEval ap = airy_asymptotic(AiryKind::Ai, zp);
        AiryEval am = airy_asymptotic(AiryKind::Ai, zm);
        complex_t v = std::exp(i * pi_v / 6.0) * ap.value +
                      std::exp(-i * pi_v / 6.0) * am.value;
        return AiryEval{v, ap.abs_error + am.abs_error};
    }
    case AiryKind::dAi: {
        if (std::abs(argz) < pi_v - 1e-9) {
            complex_t v = -std::pow(z, 0.25) * std::exp(-zeta) / (2.0 * std::sqrt(pi_v));
            double b = airy_p1_bound(z);
            return AiryEval{v, std::abs(v) * b};
        }
        complex_t w = -z;
        if (std::abs(std::arg(w)) < 2.0 * pi_v / 3.0 - 1e-9) {
            complex_t zw = (2.0 / 3.0) * std::pow(w, 1.5);
            complex_t amp = std::pow(w, 0.25) / std::sqrt(pi_v);
            complex_t v = amp * std::sin(zw - 0.25 * pi_v);
            double b1 = airy_p1_bound(w * std::exp(i * pi_v / 3.0));
            double b2 = airy_p1_bound(w * std::exp(-i * pi_v / 3.0));
            double grow = std::exp(std::abs(zw.imag()));
            return AiryEval{v, std::abs(amp) * 0.5 * grow * (b1 + b2)};
        }
        return bad();
    }
    case AiryKind::dBi: {
        if (std::abs(argz) < pi_v / 3.0 - 1e-9) {
            complex_t v = std::pow(z, 0.25) * std::exp(zeta) / std::sqrt(pi_v);
            double b = 0.5 * (airy_p1_bound(z * std::exp(-2.0 * i * pi_v / 3.0)) +
                              airy_p1_bound(z * std::exp(2.0 * i * pi_v / 3.0)));
            return AiryEval{v, std::abs(v) * b};
        }
        complex_t w = -z;
        if (std::abs(std::arg(w)) < 2.0 * pi_v / 3.0 - 1e-9) {
            complex_t zw = (2.0 / 3.0) * std::pow(w, 1.5);
            complex_t amp = std::pow(w, 0.25) / std::sqrt(pi_v);
            complex_t v = amp * std::cos(zw - 0.25 * pi_v);
            double b1 = airy_p1_bound(w * std::exp(i * pi_v / 3.0));
            double b2 = airy_p1_bound(w * std::exp(-i * pi_v / 3.0));
            double grow = std::exp(std::abs(zw.imag()));
            return AiryEval{v, std::abs(amp) * 0.5 * grow * (b1 + b2)};
        }
        complex_t zp = z * std::exp(2.0 * i * pi_v / 3.0);
        complex_t zm = z * std::exp(-2.0 * i * pi_v / 3.0);
        AiryEval ap = airy_asymptotic(AiryKind::dAi, zp);
        AiryEval am = airy_asymptotic(AiryKind::dAi, zm);
        complex_t v = std::exp(i * 5.0 * pi_v / 6.0) * ap.value +
                      std::exp(-i * 5.0 * pi_v / 6.0) * am.value;
        return AiryEval{v, ap.abs_error + am.abs_error};
    }
    }
    return bad();
}

} // namespace detail

/// Best available evaluation with a certified absolute error bound.
inline AiryEval airy_eval(AiryKind which, complex_t z, double tol) {
    AiryEval taylor = detail::airy_taylor_any(which, z, tol);
    double scale = std::max(std::abs(taylor.value), 1e-300);
    if (taylor.abs_error <= tol * scale)
        return taylor;
    AiryEval asym = detail::airy_asymptotic(which, z);
    return (asym.abs_error < taylor.abs_error) ? asym : taylor;
}

/// Checked evaluation; throws if the requested tolerance is unreachable.
inline complex_t airy(AiryKind which, complex_t z, double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("airy: tol must be positive");
    AiryEval e = airy_eval(which, z, tol);
    double scale = std::max(std::abs(e.value), 1e-300);
    if (e.abs_error > tol * scale && e.abs_error > tol)
        throw precision_error("airy: tolerance unreachable at this argument",
                              e.abs_error);
    return e.value;
}

} // namespace specdet
