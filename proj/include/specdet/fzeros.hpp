#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "specdet/airy.hpp"
#include "specdet/bessel.hpp"
#include "specdet/errors.hpp"

namespace specdet {

/// Brent's method on a sign-changing bracket [a, b].
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double xtol, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if (fa * fb > 0.0)
        throw search_error("brent_root: bracket does not change sign");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0)
            return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0)
                q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw search_error("brent_root: iteration budget exhausted");
}

/// First `count` positive zeros j_{nu,s} of J_nu, strictly increasing.
inline std::vector<double> jnu_positive_zeros(double nu, int count,
                                              double tol = 1e-12) {
    if (nu < 0.0)
        throw std::domain_error("jnu_positive_zeros: order must be >= 0");
    if (count < 1)
        throw std::domain_error("jnu_positive_zeros: count must be >= 1");
    auto f = [&](double x) { return bessel_j(nu, complex_t(x, 0.0), 1e-11).real(); };
    std::vector<double> zeros;
    // the first zero exceeds nu; march with a sub-period step
    double x = nu + 0.3;
    double step = 0.5;
    double fx = f(x);
    int guard = 0;
    while (static_cast<int>(zeros.size()) < count) {
        double xn = x + step;
        double fn = f(xn);
        if (fx == 0.0) {
            zeros.push_back(x);
            fx = fn;
            x = xn;
            continue;
        }
        if (fx * fn < 0.0)
            zeros.push_back(brent_root(f, x, xn, tol));
        x = xn;
        fx = fn;
        if (++guard > 100000)
            throw search_error("jnu_positive_zeros: bracketing failed");
    }
    return zeros;
}

/// Magnitudes |a_s| of the first `count` zeros of Ai on the negative axis.
inline std::vector<double> airy_negative_zeros(int count, double tol = 1e-12) {
    if (count < 1)
        throw std::domain_error("airy_negative_zeros: count must be >= 1");
    auto f = [&](double t) { return airy(AiryKind::Ai, complex_t(-t, 0.0), 1e-11).real(); };
    std::vector<double> zeros;
    double t = 1.0, step = 0.25, ft = f(t);
    int guard = 0;
    while (static_cast<int>(zeros.size()) < count) {
        double tn = t + step;
        double fn = f(tn);
        if (ft * fn < 0.0)
            zeros.push_back(brent_root(f, t, tn, tol));
        t = tn;
        ft = fn;
        if (++guard > 10000)
            throw search_error("airy_negative_zeros: bracketing failed");
    }
    return zeros;
}

} // namespace specdet
