#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "specdet/cover.hpp"
#include "specdet/errors.hpp"

namespace specdet {

/// Solution data at a point of the cover.  The physical pair is
/// (value, derivative) * exp(ledger); the ledger absorbs exponential range.
struct SolutionSample {
    CoverPoint x;
    complex_t value{};
    complex_t derivative{};
    double ledger = 0.0;

    complex_t physical_value() const { return value * std::exp(ledger); }
    complex_t physical_derivative() const { return derivative * std::exp(ledger); }
};

/// Piecewise path on the cover: radial runs at fixed argument and arcs at
/// fixed modulus.  Enough for every route we integrate.
struct PathSeg {
    enum class Kind { Radial, Arc } kind;
    // Radial: r0 -> r1 at fixed theta.   Arc: theta0 -> theta1 at fixed r.
    double a0, a1, fixed;

    static PathSeg radial(double r0, double r1, double theta) {
        return PathSeg{Kind::Radial, r0, r1, theta};
    }
    static PathSeg arc(double theta0, double theta1, double r) {
        return PathSeg{Kind::Arc, theta0, theta1, r};
    }

    CoverPoint point(double s) const {
        if (kind == Kind::Radial)
            return CoverPoint{std::log(a0 + s * (a1 - a0)), fixed};
        return CoverPoint{std::log(fixed), a0 + s * (a1 - a0)};
    }
    // dx/ds as a complex number
    complex_t tangent(double s) const {
        if (kind == Kind::Radial) {
            return (a1 - a0) * std::exp(complex_t(0.0, fixed));
        }
        CoverPoint x = point(s);
        return complex_t(0.0, a1 - a0) * cover_project(x);
    }
    double length() const {
        if (kind == Kind::Radial)
            return std::abs(a1 - a0);
        return std::abs(a1 - a0) * fixed;
    }
};

namespace detail {

// Dormand-Prince 5(4) tableau
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
inline constexpr double dp_b5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double dp_b4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695,
                                    393.0 / 640,     -92097.0 / 339200,
                                    187.0 / 2100,    1.0 / 40};

} // namespace detail

/// Advance psi'' = V(x) psi along one path segment with an embedded
/// Dormand-Prince pair.  rel_tol is the per-step relative tolerance.
inline SolutionSample integrate_segment(
    const std::function<complex_t(const CoverPoint&)>& V, SolutionSample y0,
    const PathSeg& seg, double rel_tol, long max_steps = 40'000'000) {
    complex_t y[2] = {y0.value, y0.derivative};
    double ledger = y0.ledger;

    auto rhs = [&](double s, const complex_t yy[2], complex_t out[2]) {
        CoverPoint x = seg.point(s);
        complex_t xp = seg.tangent(s);
        out[0] = yy[1] * xp;
        out[1] = V(x) * yy[0] * xp;
    };

    double s = 0.0;
    // initial step from the local frequency scale
    double vmag = std::abs(V(seg.point(0.0))) ;
    double freq = std::sqrt(std::max(vmag, 1e-12)) * std::max(seg.length(), 1e-300);
    double h = std::min(0.5, 0.5 / std::max(freq, 1.0));
    long steps = 0;

    complex_t k[7][2];
    while (s < 1.0) {
        if (++steps > max_steps)
            throw integration_error("integrate_segment: step budget exhausted");
        if (s + h > 1.0)
            h = 1.0 - s;

        rhs(s, y, k[0]);
        for (int i = 1; i < 7; ++i) {
            complex_t yi[2] = {y[0], y[1]};
            for (int j = 0; j < i; ++j) {
                yi[0] += h * detail::dp_a[i][j] * k[j][0];
                yi[1] += h * detail::dp_a[i][j] * k[j][1];
            }
            rhs(s + detail::dp_c[i] * h, yi, k[i]);
        }
        complex_t y5[2] = {y[0], y[1]}, y4[2] = {y[0], y[1]};
        for (int j = 0; j < 7; ++j) {
            y5[0] += h * detail::dp_b5[j] * k[j][0];
            y5[1] += h * detail::dp_b5[j] * k[j][1];
            y4[0] += h * detail::dp_b4[j] * k[j][0];
            y4[1] += h * detail::dp_b4[j] * k[j][1];
        }
        double sc0 = std::abs(y[0]) + std::abs(h * k[0][0]) + 1e-290;
        double sc1 = std::abs(y[1]) + std::abs(h * k[0][1]) + 1e-290;
        double err = std::max(std::abs(y5[0] - y4[0]) / sc0,
                              std::abs(y5[1] - y4[1]) / sc1);
        double ratio = err / rel_tol;
        if (ratio <= 1.0) {
            s += h;
            y[0] = y5[0];
            y[1] = y5[1];
            double m = std::max(std::abs(y[0]), std::abs(y[1]));
            if (m > 1e6 || (m < 1e-6 && m > 0.0)) {
                double lg = std::log(m);
                double f = std::exp(-lg);
                y[0] *= f;
                y[1] *= f;
                ledger += lg;
            }
        }
        double grow = (ratio > 0.0) ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        if (h < 1e-15)
            throw integration_error("integrate_segment: step size underflow");
    }
    return SolutionSample{seg.point(1.0), y[0], y[1], ledger};
}

inline SolutionSample integrate_path(
    const std::function<complex_t(const CoverPoint&)>& V, SolutionSample y0,
    const std::vector<PathSeg>& path, double rel_tol) {
    SolutionSample y = y0;
    for (const auto& seg : path)
        y = integrate_segment(V, y, seg, rel_tol);
    return y;
}

/// Radial-then-arc route between two cover points (the arc is run at the
/// destination modulus).
inline std::vector<PathSeg> route_ray_then_arc(const CoverPoint& from,
                                               const CoverPoint& to) {
    std::vector<PathSeg> segs;
    double r0 = cover_abs(from), r1 = cover_abs(to);
    if (r0 != r1)
        segs.push_back(PathSeg::radial(r0, r1, from.arg));
    if (from.arg != to.arg)
        segs.push_back(PathSeg::arc(from.arg, to.arg, r1));
    return segs;
}

/// Arc-then-radial alternative, used by the path-independence checks.
inline std::vector<PathSeg> route_arc_then_ray(const CoverPoint& from,
                                               const CoverPoint& to) {
    std::vector<PathSeg> segs;
    double r0 = cover_abs(from), r1 = cover_abs(to);
    if (from.arg != to.arg)
        segs.push_back(PathSeg::arc(from.arg, to.arg, r0));
    if (r0 != r1)
        segs.push_back(PathSeg::radial(r0, r1, to.arg));
    return segs;
}

} // namespace specdet
