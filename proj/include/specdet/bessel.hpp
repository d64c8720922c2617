#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>

#include "specdet/cover.hpp"
#include "specdet/errors.hpp"
#include "specdet/gammafn.hpp"

namespace specdet {

/// Result of a truncated power-series evaluation.
struct SeriesEval {
    complex_t value{};
    int terms_used = 0;
    double tail_estimate = 0.0; // absolute
    double scale = 0.0;         // magnitude of the constituent pieces
};

/// Result of a divergent-asymptotic evaluation with an explicit remainder bound.
struct AsymptoticEval {
    complex_t value{};
    int n_terms = 0;
    double remainder_bound = 0.0; // absolute
};

/// Value carried together with a factored-out scalar exponent:
/// physical value = value * exp(ledger).
struct Ledgered {
    complex_t value{};
    double ledger = 0.0;

    complex_t project() const { return value * std::exp(ledger); }
};

/// A_s(nu) = (1/2 - nu)_s (1/2 + nu)_s / ((-2)^s s!).
inline complex_t asymptotic_coeff(int s, complex_t nu) {
    if (s < 0)
        throw std::domain_error("asymptotic_coeff: s must be >= 0");
    complex_t a = 1.0;
    for (int k = 1; k <= s; ++k) {
        double h = k - 0.5;
        a *= (h - nu) * (h + nu) / (-2.0 * k);
    }
    return a;
}

namespace detail {

inline constexpr int kSeriesCap = 420;

// snapping window for the integer-order formulas of Y and K
inline constexpr double kIntegerSnap = 1e-3;

inline bool near_integer(complex_t nu, int& n) {
    double r = std::round(nu.real());
    if (std::abs(nu.real() - r) < kIntegerSnap && std::abs(nu.imag()) < kIntegerSnap) {
        n = static_cast<int>(r);
        return true;
    }
    return false;
}

// sum_{k>=0} t_k with t_{k+1} = t_k * step(k); returns certified absolute
// error (tail + roundoff from cancellation).
template <typename StepFn>
inline SeriesEval sum_series(complex_t t0, StepFn step, double tol_abs) {
    complex_t sum = 0.0, term = t0;
    double max_term = 0.0;
    int k = 0;
    for (; k < kSeriesCap; ++k) {
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        complex_t ratio = step(k);
        term *= ratio;
        if (std::abs(term) < tol_abs && std::abs(ratio) < 0.9)
            break;
    }
    double tail = std::abs(term);
    if (k == kSeriesCap)
        tail = std::max(tail, std::abs(term) * 10.0);
    double roundoff = 4.0 * kEps * max_term * std::sqrt(static_cast<double>(k + 2));
    return SeriesEval{sum, k + 1, tail + roundoff};
}

// (z/2)^nu from the cover lift, as value * e^ledger split
inline Ledgered half_pow(const CoverPoint& z, complex_t nu) {
    complex_t lg = nu * (cover_log(z) - std::log(2.0));
    return Ledgered{std::exp(complex_t(0.0, lg.imag())), lg.real()};
}

// --- small-z series ------------------------------------------------------

// J_nu or I_nu on the principal sheet: sign = -1 for J, +1 for I.
inline SeriesEval cylinder_series(complex_t nu, const CoverPoint& z, double sign,
                                  double tol) {
    complex_t zc = cover_project(z);
    complex_t w = 0.25 * zc * zc * sign;
    complex_t t0 = rgamma_fn(nu + 1.0);
    auto se = sum_series(
        t0, [&](int k) { return w / ((k + 1.0) * (nu + 1.0 + static_cast<double>(k))); },
        tol * std::max(1.0, std::abs(t0)) * 1e-3);
    Ledgered pref = half_pow(z, nu);
    se.value *= pref.project();
    se.tail_estimate *= std::abs(pref.project());
    return se;
}

// Y_n(z) for integer n >= 0, principal sheet.
inline SeriesEval bessel_y_int_series(int n, const CoverPoint& z, double tol) {
    complex_t zc = cover_project(z);
    complex_t q = 0.25 * zc * zc; // (z/2)^2
    complex_t logz2 = cover_log(z) - std::log(2.0);

    // finite part
    complex_t finite = 0.0;
    if (n > 0) {
        complex_t zp = std::exp(-static_cast<double>(n) * logz2);
        complex_t qk = 1.0;
        double fac = 1.0; // (n-k-1)!/k!
        for (int k = 0; k < n - 1; ++k)
            fac *= (n - 1 - k);
        for (int k = 0; k < n; ++k) {
            finite += fac * qk;
            qk *= q;
            if (k + 1 < n)
                fac /= static_cast<double>(n - 1 - k) * (k + 1.0);
        }
        finite *= -zp / pi_v;
    }

    SeriesEval jn = cylinder_series(static_cast<double>(n), z, -1.0, tol);

    // digamma series
    complex_t zpn = std::exp(static_cast<double>(n) * logz2);
    complex_t term = zpn / gamma_fn(static_cast<double>(n + 1));
    complex_t s = 0.0;
    double max_term = 0.0;
    int k = 0;
    for (; k < kSeriesCap; ++k) {
        complex_t contrib = term * (digamma_int(k + 1) + digamma_int(n + k + 1));
        s += contrib;
        max_term = std::max(max_term, std::abs(contrib));
        term *= -q / ((k + 1.0) * (n + k + 1.0));
        if (std::abs(term) * 400.0 < tol * std::max(1.0, std::abs(s)) && k > 3)
            break;
    }
    complex_t y = finite + (2.0 / pi_v) * jn.value * logz2 - s / pi_v;
    double err = jn.tail_estimate * std::abs(logz2) +
                 (std::abs(term) * 20.0 + 4.0 * kEps * max_term * (k + 2)) / pi_v +
                 4.0 * kEps * (std::abs(finite) + std::abs(s));
    double scl = std::max({std::abs(finite), std::abs(jn.value) * (1.0 + std::abs(logz2)),
                           std::abs(s) / pi_v});
    return SeriesEval{y, k + 1, err, scl};
}

// K_n(z) for integer n >= 0, principal sheet.
inline SeriesEval mod_bessel_k_int_series(int n, const CoverPoint& z, double tol) {
    complex_t zc = cover_project(z);
    complex_t q = 0.25 * zc * zc;
    complex_t logz2 = cover_log(z) - std::log(2.0);
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;

    complex_t finite = 0.0;
    if (n > 0) {
        complex_t zp = std::exp(-static_cast<double>(n) * logz2);
        complex_t qk = 1.0;
        double fac = 1.0;
        for (int k = 0; k < n - 1; ++k)
            fac *= (n - 1 - k);
        for (int k = 0; k < n; ++k) {
            finite += fac * qk;
            qk *= -q;
            if (k + 1 < n)
                fac /= static_cast<double>(n - 1 - k) * (k + 1.0);
        }
        finite *= 0.5 * zp;
    }

    SeriesEval in = cylinder_series(static_cast<double>(n), z, +1.0, tol);

    complex_t zpn = std::exp(static_cast<double>(n) * logz2);
    complex_t term = zpn / gamma_fn(static_cast<double>(n + 1));
    complex_t s = 0.0;
    double max_term = 0.0;
    int k = 0;
    for (; k < kSeriesCap; ++k) {
        complex_t contrib = term * (digamma_int(k + 1) + digamma_int(n + k + 1));
        s += contrib;
        max_term = std::max(max_term, std::abs(contrib));
        term *= q / ((k + 1.0) * (n + k + 1.0));
        if (std::abs(term) * 400.0 < tol * std::max(1.0, std::abs(s)) && k > 3)
            break;
    }
    complex_t kv = finite - sgn * logz2 * in.value + sgn * 0.5 * s;
    double err = in.tail_estimate * std::abs(logz2) + std::abs(term) * 20.0 +
                 4.0 * kEps * (max_term * (k + 2) + std::abs(finite) + std::abs(s));
    double scl = std::max({std::abs(finite), std::abs(in.value) * (1.0 + std::abs(logz2)),
                           0.5 * std::abs(s)});
    return SeriesEval{kv, k + 1, err, scl};
}

// K_nu small-z via the cosecant combination; |nu - n| >= snap enforced by caller.
inline SeriesEval mod_bessel_k_generic_series(complex_t nu, const CoverPoint& z,
                                              double tol) {
    SeriesEval ip = cylinder_series(nu, z, +1.0, tol);
    SeriesEval im = cylinder_series(-nu, z, +1.0, tol);
    complex_t csc = 1.0 / std::sin(pi_v * nu);
    complex_t kv = 0.5 * pi_v * csc * (im.value - ip.value);
    double cancel = 4.0 * kEps * (std::abs(ip.value) + std::abs(im.value));
    double err = 0.5 * pi_v * std::abs(csc) *
                 (ip.tail_estimate + im.tail_estimate + cancel);
    double scl = 0.5 * pi_v * std::abs(csc) *
                 std::max(std::abs(ip.value), std::abs(im.value));
    return SeriesEval{kv, ip.terms_used + im.terms_used, err, scl};
}

// Y_nu small-z, generic order.
inline SeriesEval bessel_y_generic_series(complex_t nu, const CoverPoint& z,
                                          double tol) {
    SeriesEval jp = cylinder_series(nu, z, -1.0, tol);
    SeriesEval jm = cylinder_series(-nu, z, -1.0, tol);
    complex_t cot = std::cos(pi_v * nu) / std::sin(pi_v * nu);
    complex_t csc = 1.0 / std::sin(pi_v * nu);
    complex_t y = cot * jp.value - csc * jm.value;
    double cancel = 4.0 * kEps * (std::abs(cot * jp.value) + std::abs(csc * jm.value));
    double err = std::abs(cot) * jp.tail_estimate + std::abs(csc) * jm.tail_estimate +
                 cancel;
    double scl = std::max({std::abs(cot * jp.value), std::abs(csc * jm.value),
                           std::abs(jp.value), std::abs(jm.value)});
    return SeriesEval{y, jp.terms_used + jm.terms_used, err, scl};
}

// --- large-z asymptotics --------------------------------------------------

// remainder bound for the e^{-z} sum, by angular regime; on a regime
// boundary the adjacent bounds are maximized.
inline double k_remainder_bound(int n, complex_t zc, complex_t nu, complex_t an) {
    double az = std::abs(zc);
    double a = std::abs(std::arg(zc));
    double nu2 = std::abs(nu * nu - 0.25);
    double gr = gamma_fn(0.5 * n + 1.0) / gamma_fn(0.5 * n + 0.5);
    double b1 = 2.0 * std::abs(an) / std::pow(az, n) * std::exp(nu2 / az);
    double b2 = 2.0 * std::sqrt(pi_v) * gr * std::abs(an) / std::pow(az, n) *
                std::exp(0.5 * pi_v * nu2 / az);
    double rz = std::abs(zc.real());
    double b3 = (rz > 0.0) ? 4.0 * std::sqrt(pi_v) * gr * std::abs(an) / std::pow(rz, n) *
                                 std::exp(pi_v * nu2 / rz)
                           : std::numeric_limits<double>::infinity();
    const double edge = 1e-12;
    if (a < 0.5 * pi_v - edge)
        return b1;
    if (a < 0.5 * pi_v + edge)
        return std::max(b1, b2);
    if (a < pi_v - edge)
        return b2;
    if (a < pi_v + edge)
        return std::max(b2, b3);
    return b3;
}

// e^{z} K_nu(z): value split from the exponential.  Chooses the number of
// terms minimizing the certified remainder.
inline AsymptoticEval k_scaled_asymptotic(complex_t nu, complex_t zc) {
    complex_t pref = std::sqrt(0.5 * pi_v / zc);
    complex_t sum = 0.0, a = 1.0;
    complex_t best_sum = 0.0;
    double best_bound = std::numeric_limits<double>::infinity();
    int best_n = 0;
    int n = 0;
    for (; n < 60; ++n) {
        double bound = k_remainder_bound(n, zc, nu, a);
        if (bound < best_bound) {
            best_bound = bound;
            best_sum = sum;
            best_n = n;
        }
        if (bound > 1e4 * best_bound && n > best_n + 4)
            break;
        sum += a / std::pow(zc, n);
        double h = n + 0.5;
        a *= (h - nu) * (h + nu) / (-2.0 * (n + 1.0));
    }
    return AsymptoticEval{pref * best_sum, best_n, std::abs(pref) * best_bound};
}

// e^{-z} I_nu(z) on |arg z| <= pi/2: both exponential pieces, the reflected
// one weighted by e^{-2z}.
inline AsymptoticEval i_scaled_asymptotic(complex_t nu, complex_t zc) {
    complex_t pref = 1.0 / std::sqrt(2.0 * pi_v * zc);
    // growing piece: sum of (-1)^s A_s / z^s
    complex_t sum_p = 0.0, sum_m = 0.0, a = 1.0;
    double best_bound = std::numeric_limits<double>::infinity();
    complex_t best_p = 0.0, best_m = 0.0;
    int best_n = 0;
    for (int n = 0; n < 60; ++n) {
        double bp = k_remainder_bound(n, zc, nu, a);
        // conservative across the two admissible sign choices
        double gr = gamma_fn(0.5 * n + 1.0) / gamma_fn(0.5 * n + 0.5);
        double nu2 = std::abs(nu * nu - 0.25);
        double rz = std::max(std::abs(zc.real()), 1e-300);
        double bt = std::max(2.0 * std::sqrt(pi_v) * gr * std::abs(a) /
                                 std::pow(std::abs(zc), n) *
                                 std::exp(0.5 * pi_v * nu2 / std::abs(zc)),
                             4.0 * std::sqrt(pi_v) * gr * std::abs(a) / std::pow(rz, n) *
                                 std::exp(pi_v * nu2 / rz));
        double bound = bt + bp * std::exp(-2.0 * zc.real());
        if (bound < best_bound) {
            best_bound = bound;
            best_p = sum_p;
            best_m = sum_m;
            best_n = n;
        }
        if (bound > 1e4 * best_bound && n > best_n + 4)
            break;
        double sgn = (n % 2 == 0) ? 1.0 : -1.0;
        complex_t t = a / std::pow(zc, n);
        sum_p += sgn * t;
        sum_m += t;
        double h = n + 0.5;
        a *= (h - nu) * (h + nu) / (-2.0 * (n + 1.0));
    }
    // reflected exponential: sign chosen by the half-plane of arg z
    complex_t refl = (std::arg(zc) > 0.0)
                         ? complex_t(0.0, 1.0) * std::exp(complex_t(0.0, 1.0) * pi_v * nu)
                         : complex_t(0.0, -1.0) *
                               std::exp(complex_t(0.0, -1.0) * pi_v * nu);
    complex_t val = pref * (best_p + refl * std::exp(-2.0 * zc) * best_m);
    return AsymptoticEval{val, best_n, std::abs(pref) * best_bound};
}

struct EvalWithError {
    complex_t value{};
    double abs_error = std::numeric_limits<double>::infinity();
    // magnitude scale of the function near z; |value| alone collapses at zeros
    double scale = 0.0;
};

// H^(1)/H^(2) by rotating into K, valid |arg z| <= pi/2 after reduction.
inline EvalWithError hankel_asymptotic(int kind, complex_t nu, complex_t zc) {
    const complex_t i(0.0, 1.0);
    complex_t zr = (kind == 1) ? zc * std::exp(-i * (0.5 * pi_v))
                               : zc * std::exp(i * (0.5 * pi_v));
    AsymptoticEval k = k_scaled_asymptotic(nu, zr);
    complex_t expf = std::exp(-zr);
    complex_t fac = (kind == 1) ? (2.0 / (i * pi_v)) * std::exp(-i * (0.5 * pi_v) * nu)
                                : (2.0 * i / pi_v) * std::exp(i * (0.5 * pi_v) * nu);
    double mag = std::abs(fac * k.value * expf);
    return EvalWithError{fac * k.value * expf,
                         std::abs(fac) * k.remainder_bound * std::abs(expf), mag};
}

} // namespace detail

// --- public entry points ---------------------------------------------------

namespace detail {

// reduce the cover argument to [-pi/2, pi/2] by half-turns; m is the count
inline CoverPoint reduce_half_turns(const CoverPoint& z, int& m) {
    m = static_cast<int>(std::lround(z.arg / pi_v));
    return CoverPoint{z.log_modulus, z.arg - pi_v * static_cast<double>(m)};
}

inline complex_t requested_or_throw(const char* name, EvalWithError series,
                                    EvalWithError asym, double tol) {
    double tol_abs = tol * std::max({series.scale, asym.scale, 1e-300});
    // prefer the series on ties
    if (series.abs_error <= std::max(asym.abs_error, 0.0) &&
        series.abs_error <= tol_abs)
        return series.value;
    if (asym.abs_error < series.abs_error && asym.abs_error <= tol_abs)
        return asym.value;
    double best = std::min(series.abs_error, asym.abs_error);
    throw precision_error(std::string(name) +
                              ": neither representation meets tolerance"
                              " (series " +
                              std::to_string(series.abs_error) + ", asymptotic " +
                              std::to_string(asym.abs_error) + ")",
                          best);
}

} // namespace detail

/// J_nu on the universal cover; continuation J_nu(z e^{im pi}) = e^{im nu pi} J_nu(z).
inline complex_t bessel_j(complex_t nu, const CoverPoint& z, double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("bessel_j: tol must be positive");
    int nint;
    if (detail::near_integer(nu, nint) && std::abs(nu - complex_t(nint)) == 0.0 &&
        nint < 0) {
        // J_{-n} = (-1)^n J_n
        double s = (((-nint) % 2) == 0) ? 1.0 : -1.0;
        return s * bessel_j(complex_t(-nint), z, tol);
    }
    int m;
    CoverPoint z0 = detail::reduce_half_turns(z, m);
    complex_t phase = std::exp(complex_t(0.0, 1.0) * pi_v * nu * static_cast<double>(m));
    double az = cover_abs(z0);
    detail::EvalWithError ser, asy;
    if (az < 46.0) {
        SeriesEval se = detail::cylinder_series(nu, z0, -1.0, tol);
        double first = std::abs(detail::half_pow(z0, nu).project() * rgamma_fn(nu + 1.0));
        ser = {se.value, se.tail_estimate, std::max(std::abs(se.value), first)};
    }
    if (az > 8.0) {
        complex_t zc = cover_project(z0);
        auto h1 = detail::hankel_asymptotic(1, nu, zc);
        auto h2 = detail::hankel_asymptotic(2, nu, zc);
        asy = {0.5 * (h1.value + h2.value), 0.5 * (h1.abs_error + h2.abs_error),
               0.5 * (h1.scale + h2.scale)};
    }
    return phase * detail::requested_or_throw("bessel_j", ser, asy, tol);
}

inline complex_t bessel_j(complex_t nu, complex_t z, double tol) {
    return bessel_j(nu, cover_from_complex(z), tol);
}

/// Y_nu on the cover; integer orders use the logarithmic series, and orders
/// within the snap window of an integer are snapped to it.
inline complex_t bessel_y(complex_t nu, const CoverPoint& z, double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("bessel_y: tol must be positive");
    int m;
    CoverPoint z0 = detail::reduce_half_turns(z, m);
    int n;
    bool integer_order = detail::near_integer(nu, n);
    double az = cover_abs(z0);

    complex_t y0, j0;
    detail::EvalWithError ser, asy;
    if (az < 46.0) {
        SeriesEval se;
        if (integer_order) {
            int na = std::abs(n);
            se = detail::bessel_y_int_series(na, z0, tol);
            if (n < 0 && (na % 2) != 0)
                se.value = -se.value;
        } else {
            se = detail::bessel_y_generic_series(nu, z0, tol);
        }
        ser = {se.value, se.tail_estimate, std::max(std::abs(se.value), se.scale)};
    }
    if (az > 8.0) {
        complex_t nz = integer_order ? complex_t(n) : nu;
        complex_t zc = cover_project(z0);
        auto h1 = detail::hankel_asymptotic(1, nz, zc);
        auto h2 = detail::hankel_asymptotic(2, nz, zc);
        asy = {(h1.value - h2.value) / complex_t(0.0, 2.0),
               0.5 * (h1.abs_error + h2.abs_error), 0.5 * (h1.scale + h2.scale)};
    }
    y0 = detail::requested_or_throw("bessel_y", ser, asy, tol);
    if (m == 0)
        return y0;

    // continuation needs J on the principal sheet as well
    j0 = bessel_j(integer_order ? complex_t(n) : nu, z0, tol);
    if (integer_order) {
        double s = ((static_cast<long long>(m) * n) % 2 == 0) ? 1.0 : -1.0;
        return s * (y0 + complex_t(0.0, 2.0 * m) * j0);
    }
    complex_t i(0.0, 1.0);
    complex_t mnp = pi_v * nu * static_cast<double>(m);
    complex_t cot = std::cos(pi_v * nu) / std::sin(pi_v * nu);
    return std::exp(-i * mnp) * y0 + 2.0 * i * std::sin(mnp) * cot * j0;
}

inline complex_t bessel_y(complex_t nu, complex_t z, double tol) {
    return bessel_y(nu, cover_from_complex(z), tol);
}

/// Hankel functions H^(1), H^(2) = J +- i Y.
inline complex_t hankel(int kind, complex_t nu, const CoverPoint& z, double tol) {
    if (kind != 1 && kind != 2)
        throw std::domain_error("hankel: kind must be 1 or 2");
    complex_t j = bessel_j(nu, z, tol);
    complex_t y = bessel_y(nu, z, tol);
    complex_t i(0.0, 1.0);
    return (kind == 1) ? j + i * y : j - i * y;
}

/// I_nu on the cover; continuation I_nu(z e^{im pi}) = e^{im nu pi} I_nu(z).
inline complex_t mod_bessel_i(complex_t nu, const CoverPoint& z, double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("mod_bessel_i: tol must be positive");
    int m;
    CoverPoint z0 = detail::reduce_half_turns(z, m);
    complex_t phase = std::exp(complex_t(0.0, 1.0) * pi_v * nu * static_cast<double>(m));
    double az = cover_abs(z0);
    detail::EvalWithError ser, asy;
    if (az < 46.0) {
        SeriesEval se = detail::cylinder_series(nu, z0, +1.0, tol);
        double first = std::abs(detail::half_pow(z0, nu).project() * rgamma_fn(nu + 1.0));
        ser = {se.value, se.tail_estimate, std::max(std::abs(se.value), first)};
    }
    if (az > 8.0) {
        AsymptoticEval ae = detail::i_scaled_asymptotic(nu, cover_project(z0));
        complex_t expf = std::exp(cover_project(z0));
        asy = {ae.value * expf, ae.remainder_bound * std::abs(expf),
               std::abs(ae.value * expf)};
    }
    return phase * detail::requested_or_throw("mod_bessel_i", ser, asy, tol);
}

inline complex_t mod_bessel_i(complex_t nu, complex_t z, double tol) {
    return mod_bessel_i(nu, cover_from_complex(z), tol);
}

/// K_nu on the cover.
inline complex_t mod_bessel_k(complex_t nu, const CoverPoint& z, double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("mod_bessel_k: tol must be positive");
    int m;
    CoverPoint z0 = detail::reduce_half_turns(z, m);
    int n;
    bool integer_order = detail::near_integer(nu, n);
    double az = cover_abs(z0);

    detail::EvalWithError ser, asy;
    if (az < 40.0) {
        SeriesEval se = integer_order
                            ? detail::mod_bessel_k_int_series(std::abs(n), z0, tol)
                            : detail::mod_bessel_k_generic_series(nu, z0, tol);
        ser = {se.value, se.tail_estimate,
               std::max(std::abs(se.value), se.scale)}; // K_{-nu} = K_nu
    }
    if (az > 8.0) {
        complex_t zc = cover_project(z0);
        AsymptoticEval ae = detail::k_scaled_asymptotic(nu, zc);
        complex_t expf = std::exp(-zc);
        asy = {ae.value * expf, ae.remainder_bound * std::abs(expf),
               std::abs(ae.value * expf)};
    }
    complex_t k0 = detail::requested_or_throw("mod_bessel_k", ser, asy, tol);
    if (m == 0)
        return k0;

    complex_t i0 = mod_bessel_i(integer_order ? complex_t(n) : nu, z0, tol);
    complex_t i(0.0, 1.0);
    if (integer_order) {
        double s1 = ((static_cast<long long>(m) * n) % 2 == 0) ? 1.0 : -1.0;
        double s2 = ((static_cast<long long>(n) * (m - 1)) % 2 == 0) ? 1.0 : -1.0;
        return s1 * k0 - i * pi_v * static_cast<double>(m) * s2 * i0;
    }
    complex_t mnp = pi_v * nu * static_cast<double>(m);
    return std::exp(-i * mnp) * k0 -
           i * pi_v * std::sin(mnp) / std::sin(pi_v * nu) * i0;
}

inline complex_t mod_bessel_k(complex_t nu, complex_t z, double tol) {
    return mod_bessel_k(nu, cover_from_complex(z), tol);
}

/// K_nu with the exponential factored out; requires the asymptotic regime.
/// Intended for huge |z| where exp(-z) underflows.
inline Ledgered mod_bessel_k_scaled(complex_t nu, complex_t zc) {
    if (std::abs(zc) < 8.0) {
        complex_t k = mod_bessel_k(nu, zc, 1e-12);
        return Ledgered{k, 0.0};
    }
    AsymptoticEval ae = detail::k_scaled_asymptotic(nu, zc);
    return Ledgered{ae.value * std::exp(complex_t(0.0, -zc.imag())), -zc.real()};
}

} // namespace specdet
