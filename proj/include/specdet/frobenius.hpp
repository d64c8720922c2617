#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specdet/errors.hpp"
#include "specdet/gammafn.hpp"
#include "specdet/ode.hpp"
#include "specdet/oscillator.hpp"

namespace specdet {

/// Truncated coefficient table for the distinguished solutions at the origin,
/// chi_+ ~ x^{l+1} (subdominant) and chi_- ~ x^{-l} (dominant).  With
/// xi = E x^2 / (4 alpha^2) the double series reads
///   chi_± = A_± x^{rho_±} sum_{j,m} c_{j,m} xi^m (x^{2 alpha}/E)^j,
/// where A_± normalizes lim x^{-rho_±} chi_± = 1/Gamma(1 ± (l+1/2)/(alpha+1)).
/// The coefficients are E-independent and vanish for m < j, so the sum is a
/// polynomial family in E with nonnegative powers; E = 0 stays finite.
struct FrobeniusSeries {
    int branch; // +1 or -1
    double alpha;
    complex_t ell;
    int J, M;
    std::vector<complex_t> coeffs; // (J+1) x (M+1), row-major

    complex_t c(int j, int m) const { return coeffs[j * (M + 1) + m]; }
};

/// Monomial denominator of the recurrence,
///   D_{j,m} = (m/alpha + j) (m/alpha + j ± (2l+1)/(2 alpha)).
/// The minus branch vanishes exactly on l + 1/2 = m + alpha j, the resonance
/// lattice; we refuse to build there instead of switching to log solutions.
inline complex_t frobenius_denominator(int branch, double alpha, complex_t ell,
                                       int j, int m) {
    complex_t base = static_cast<double>(m) / alpha + static_cast<double>(j);
    complex_t shift = (2.0 * ell + 1.0) / (2.0 * alpha);
    return base * (base + static_cast<double>(branch) * shift);
}

inline FrobeniusSeries build_series(const OscillatorParams& pr, int branch, int J,
                                    int M) {
    if (branch != 1 && branch != -1)
        throw std::domain_error("build_series: branch must be +1 or -1");
    if (J < 0 || M < 0 || J > M)
        throw std::domain_error("build_series: need 0 <= J <= M");
    FrobeniusSeries fs{branch, pr.alpha, pr.ell, J, M,
                       std::vector<complex_t>((J + 1) * (M + 1), complex_t(0.0))};
    auto& cf = fs.coeffs;
    auto at = [&](int j, int m) -> complex_t& { return cf[j * (M + 1) + m]; };
    at(0, 0) = 1.0;
    double res_thr = 1e-8 * (1.0 + std::norm(pr.ell));
    for (int m = 1; m <= M; ++m) {
        for (int j = 0; j <= std::min(J, m); ++j) {
            complex_t rhs = -at(j, m - 1);
            if (j > 0)
                rhs += at(j - 1, m - 1);
            if (rhs == complex_t(0.0))
                continue;
            complex_t D = frobenius_denominator(branch, pr.alpha, pr.ell, j, m);
            if (std::abs(D) < res_thr)
                throw resonance_error("build_series: resonant denominator", j, m);
            at(j, m) = rhs / D;
        }
    }
    return fs;
}

struct ChiEval {
    SolutionSample sample;
    double tail_estimate = 0.0;   // relative: truncation part
    double cancel_estimate = 0.0; // relative: roundoff from cancellation
};

/// Evaluate the series and its x-derivative at (x, E).  The common factor
/// A_± x^{rho} is ledgered: value carries the phase, the ledger the modulus.
inline ChiEval chi_eval(const FrobeniusSeries& fs, const CoverPoint& x, complex_t E) {
    double a = fs.alpha;
    complex_t rho = (fs.branch > 0) ? fs.ell + 1.0 : -fs.ell;
    complex_t u = cover_project(cover_pow(x, 2.0)) / (4.0 * a * a); // xi / E
    complex_t w = cover_project(cover_pow(x, 2.0 * a));             // x^{2 alpha}

    // E^{m-j} and x-powers organized so E = 0 keeps only m = j terms
    std::vector<complex_t> Epow(fs.M + 1);
    Epow[0] = 1.0;
    for (int d = 1; d <= fs.M; ++d)
        Epow[d] = Epow[d - 1] * E;

    complex_t T = 0.0, Tp = 0.0; // sum and d/dx sum (over x, excluding x^rho)
    double max_term = 0.0, row_last = 0.0;
    complex_t invx = cover_project(cover_pow(x, -1.0));
    std::vector<complex_t> wj(fs.J + 1);
    wj[0] = 1.0;
    for (int j = 1; j <= fs.J; ++j)
        wj[j] = wj[j - 1] * w;

    complex_t um = 1.0; // u^m
    for (int m = 0; m <= fs.M; ++m) {
        complex_t row = 0.0, rowp = 0.0;
        for (int j = 0; j <= std::min(fs.J, m); ++j) {
            complex_t cjm = fs.c(j, m);
            if (cjm == complex_t(0.0))
                continue;
            complex_t term = cjm * um * Epow[m - j] * wj[j];
            row += term;
            rowp += term * (2.0 * m + 2.0 * a * j);
        }
        T += row;
        Tp += rowp * invx;
        double rm = std::abs(row);
        max_term = std::max(max_term, rm);
        row_last = rm;
        um *= u;
    }

    double scale = std::max(std::abs(T), 1e-300);
    double tail = row_last / scale;
    double cancel = 8.0 * detail::kEps * max_term * std::sqrt(fs.M + 2.0) / scale;

    complex_t s = (fs.ell + 0.5) / (a + 1.0);
    complex_t A = rgamma_fn(1.0 + static_cast<double>(fs.branch) * s);
    complex_t lg = rho * cover_log(x);
    double ledger = lg.real() + std::log(std::abs(A) + 1e-300);
    complex_t phase = std::exp(complex_t(0.0, lg.imag())) * (A / std::abs(A));

    complex_t value = phase * T;
    complex_t deriv = phase * (rho * invx * T + Tp);
    return ChiEval{SolutionSample{x, value, deriv, ledger}, tail, cancel};
}

/// March a certified sample along the cover to x1 (the stable, outward
/// direction for chi_+; chi_- tolerates moderate ratios only).
inline SolutionSample chi_extend(const OscillatorParams& pr, const SolutionSample& s0,
                                 const CoverPoint& x1, double tol) {
    if (s0.x == x1)
        return s0;
    auto V = [&pr](const CoverPoint& x) { return potential(pr, x); };
    return integrate_path(V, s0, route_ray_then_arc(s0.x, x1), tol * 0.1);
}

/// Series evaluation with automatic truncation growth, falling back to a
/// smaller expansion point plus an ODE march when the series at x loses
/// accuracy to cancellation or slow decay.
inline SolutionSample chi_reach(const OscillatorParams& pr, int branch,
                                const CoverPoint& x_target, double tol) {
    int M = 24, J = 10;
    double r_target = cover_abs(x_target);
    double r0 = r_target;
    for (int attempt = 0; attempt < 60; ++attempt) {
        CoverPoint x0 = (r0 == r_target)
                            ? x_target
                            : CoverPoint{std::log(r0), x_target.arg};
        FrobeniusSeries fs = build_series(pr, branch, J, M);
        ChiEval ce = chi_eval(fs, x0, pr.E);
        while (ce.tail_estimate > 0.1 * tol &&
               ce.tail_estimate > ce.cancel_estimate && M < 480) {
            M = std::min(480, 2 * M);
            J = std::min(M, 2 * J);
            fs = build_series(pr, branch, J, M);
            ce = chi_eval(fs, x0, pr.E);
        }
        if (ce.tail_estimate + ce.cancel_estimate <= tol) {
            if (r0 == r_target)
                return ce.sample;
            return chi_extend(pr, ce.sample, x_target, tol);
        }
        // cancellation-dominated: shrink the expansion point and march
        r0 *= 0.6;
        if (r0 < 1e-4)
            break;
    }
    throw truncation_error("chi_reach: series accuracy not reachable", 0.0);
}

} // namespace specdet
