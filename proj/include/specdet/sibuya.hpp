#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "specdet/bessel.hpp"
#include "specdet/errors.hpp"
#include "specdet/ode.hpp"
#include "specdet/oscillator.hpp"

namespace specdet {

/// Reference solution of psi'' = x^{2 alpha} psi subdominant in sector k,
///   Psi_k(x) = e^{-ik pi/2} x^{1/2} K_nu(x^{alpha+1} e^{-ik pi}/(alpha+1)) / (alpha+1),
/// nu = 1/(2 alpha + 2).
struct ReferenceSolution {
    int k;
    double alpha;
};

inline SolutionSample psi_reference(int k, double alpha, const CoverPoint& x) {
    double ap1 = alpha + 1.0;
    complex_t nu(1.0 / (2.0 * ap1), 0.0);
    CoverPoint zc = cover_pow(x, ap1);
    zc.log_modulus -= std::log(ap1);
    zc.arg -= k * pi_v;
    complex_t z = cover_project(zc);

    Ledgered kv, km, kp;
    if (std::abs(z) > 12.0) {
        kv = mod_bessel_k_scaled(nu, z);
        km = mod_bessel_k_scaled(nu - 1.0, z);
        kp = mod_bessel_k_scaled(nu + 1.0, z);
    } else {
        kv = Ledgered{mod_bessel_k(nu, zc, 1e-13), 0.0};
        km = Ledgered{mod_bessel_k(nu - 1.0, zc, 1e-13), 0.0};
        kp = Ledgered{mod_bessel_k(nu + 1.0, zc, 1e-13), 0.0};
        km.ledger = kp.ledger = kv.ledger;
    }
    complex_t kd = -0.5 * (km.value + kp.value); // K_nu'(z), shares the ledger

    complex_t i(0.0, 1.0);
    complex_t pref = std::exp(-i * (0.5 * pi_v) * static_cast<double>(k)) / ap1;
    complex_t sqx = cover_project(cover_pow(x, 0.5));
    complex_t xa = cover_project(cover_pow(x, alpha));
    complex_t dz = xa * std::exp(-i * pi_v * static_cast<double>(k)); // dz/dx

    complex_t val = pref * sqx * kv.value;
    complex_t der = pref * (0.5 * sqx * cover_project(cover_pow(x, -1.0)) * kv.value +
                            sqx * kd * dz);
    return SolutionSample{x, val, der, kv.ledger};
}

namespace detail {

// Potential along the ray arg x = k pi/(alpha+1) written so that the
// x^{2 alpha} part is exactly real:  c(t) = t^{2a} + l(l+1)/t^2 - E_k,
// E_k = E e^{2 i theta_k}.  Keeps the tail integrand free of the huge
// cancellation between x^{2 alpha} and its unit phase.
struct RayFrame {
    double alpha;
    complex_t ll1; // l(l+1)
    complex_t Ek;

    complex_t c(double t) const {
        return std::pow(t, 2.0 * alpha) + ll1 / (t * t) - Ek;
    }
    complex_t c1(double t) const {
        return 2.0 * alpha * std::pow(t, 2.0 * alpha - 1.0) - 2.0 * ll1 / (t * t * t);
    }
    complex_t c2(double t) const {
        return 2.0 * alpha * (2.0 * alpha - 1.0) * std::pow(t, 2.0 * alpha - 2.0) +
               6.0 * ll1 / (t * t * t * t);
    }
    complex_t q(double t) const { return std::sqrt(c(t)); } // Re > 0 at anchor scales
};

inline RayFrame make_ray_frame(const OscillatorParams& pr, int k) {
    double th = pi_v * (static_cast<double>(k) / (pr.alpha + 1.0));
    complex_t Ek = pr.E * std::exp(complex_t(0.0, 2.0 * th));
    return RayFrame{pr.alpha, pr.ell * (pr.ell + 1.0), Ek};
}

// action defect of the comparison equation at t:
//   delta(t) = [(1/4) c''/c - (5/16) (c'/c)^2] / c  -  (nu^2 - 1/4)/ztilde^2
inline double anchor_defect(const RayFrame& rf, double t) {
    // far enough out the defect is decades below any tolerance; avoid
    // overflowing t^{2 alpha} on the geometric panels
    if (2.0 * rf.alpha * std::log(t) > 340.0)
        return 0.0;
    complex_t c = rf.c(t);
    complex_t r = (0.25 * rf.c2(t) / c - (5.0 / 16.0) * rf.c1(t) * rf.c1(t) / (c * c)) / c;
    double ap1 = rf.alpha + 1.0;
    double nu2m = 1.0 / (4.0 * ap1 * ap1) - 0.25;
    complex_t zt = std::pow(t, ap1) / ap1;
    if (rf.alpha > 1.3) {
        zt += rf.Ek * std::pow(t, 1.0 - rf.alpha) / (2.0 * (rf.alpha - 1.0)) -
              rf.ll1 * std::pow(t, -ap1) / (2.0 * ap1);
    }
    return std::abs(r - nu2m / (zt * zt));
}

// integrated defect from r outward; geometric panels, 8-node Gauss-Legendre
inline double anchor_error_estimate(const RayFrame& rf, double r) {
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    double acc = 0.0;
    double a = r;
    for (int panel = 0; panel < 48; ++panel) {
        double b = 2.0 * a;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (double sg : {-1.0, 1.0}) {
                double t = mid + sg * half * gx[i];
                s += gw[i] * anchor_defect(rf, t) * std::abs(rf.q(t));
            }
        }
        s *= half;
        acc += s;
        if ((s < 1e-3 * acc && panel > 2) || !(s > 0.0))
            break;
        a = b;
    }
    double safety = 3.0;
    if (rf.alpha <= 1.3)
        safety *= 1.0 + std::abs(std::log(10.0 * r));
    return 0.5 * safety * acc;
}

// tail of the action beyond the anchor: integral of (q - t^alpha), panels
// doubling outward, then the closed two-term remainder (alpha > 1.3) or a
// hard cutoff (alpha near 1, where the tail diverges and the normalization
// is fixed only up to an E-analytic factor).
inline complex_t action_tail(const RayFrame& rf, double r, double tol) {
    static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    auto h = [&](double t) {
        complex_t num = rf.ll1 / (t * t) - rf.Ek;
        return num / (rf.q(t) + std::pow(t, rf.alpha));
    };
    complex_t acc = 0.0;
    double a = r;
    int panels = 0;
    double cap = (rf.alpha > 1.3) ? 1e18 : std::max(1e4, 100.0 * r);
    while (a < cap && panels < 120) {
        double b = std::min(2.0 * a, cap);
        // inner refinement: halve until stable
        complex_t coarse = 0.0, fine = 0.0;
        int nsub = 1;
        for (int pass = 0; pass < 14; ++pass) {
            complex_t s = 0.0;
            double w = (b - a) / nsub;
            for (int j = 0; j < nsub; ++j) {
                double p0 = a + j * w, mid = p0 + 0.5 * w, half = 0.5 * w;
                for (int i = 0; i < 4; ++i)
                    for (double sg : {-1.0, 1.0})
                        s += gw[i] * h(mid + sg * half * gx[i]);
                // weight applied after loop
            }
            s *= 0.5 * w;
            coarse = fine;
            fine = s;
            if (pass > 0 && std::abs(fine - coarse) < 0.05 * tol * (1.0 + std::abs(acc)))
                break;
            nsub *= 2;
        }
        acc += fine;
        if (rf.alpha > 1.3) {
            // leading analytic remainder beyond b, with its own next-order gauge
            complex_t rem = rf.ll1 * std::pow(b, -rf.alpha - 1.0) /
                                (2.0 * (rf.alpha + 1.0)) -
                            rf.Ek * std::pow(b, 1.0 - rf.alpha) /
                                (2.0 * (rf.alpha - 1.0));
            double next = std::abs(rf.Ek * rf.Ek) / 8.0 *
                          std::pow(b, 1.0 - 3.0 * rf.alpha) / (3.0 * rf.alpha - 1.0);
            if (next < 0.02 * tol * (1.0 + std::abs(acc + rem)))
                return acc + rem;
        }
        a = b;
        ++panels;
    }
    return acc;
}

} // namespace detail

/// Anchor radius on the ray arg x = k pi/(alpha+1): far enough that the
/// corrected reference data meets the tolerance, with the asymptotic-K
/// regime guaranteed whenever a correction is in play.
inline double far_anchor(const OscillatorParams& pr, double tol, int k = 0) {
    if (!(tol > 0.0))
        throw std::domain_error("far_anchor: tol must be positive");
    detail::RayFrame rf = detail::make_ray_frame(pr, k);
    double drive = std::max(std::abs(pr.E), std::abs(rf.ll1));
    if (drive == 0.0)
        return 1.0;
    double r = std::max(1.0, std::pow(drive * 1e3, 1.0 / (2.0 * pr.alpha)));
    for (int it = 0; it < 800; ++it) {
        double est = detail::anchor_error_estimate(rf, r);
        if (!(est > 0.3 * tol))
            break;
        r *= 1.15;
        if ((pr.alpha + 1.0) * std::log(r) > std::log(1e9 * (pr.alpha + 1.0)))
            break; // phase cap; the estimate has long since bottomed out
    }
    // keep the anchor K evaluation inside its certified regime
    double ap1 = pr.alpha + 1.0;
    double zmin = 3.0 + 0.5 * std::log(100.0 / tol);
    while (std::pow(r, ap1) / ap1 < zmin)
        r *= 1.1;
    return r;
}

/// Reference data at the anchor: the corrected Bessel form
///   psi_hat = (alpha+1)^{-1/2} e^{-ik pi/2} g^{-1/2} ztilde^{1/2} K_nu(ztilde),
/// with ztilde the action of the full potential normalized to
/// x^{alpha+1}/(alpha+1) at infinity.  Reduces to Psi_k when E = l = 0.
inline SolutionSample anchor_sample(const OscillatorParams& pr, int k, double r,
                                    double tol) {
    double ap1 = pr.alpha + 1.0;
    double th = pi_v * (static_cast<double>(k) / ap1);
    CoverPoint x{std::log(r), th};
    detail::RayFrame rf = detail::make_ray_frame(pr, k);
    if (std::abs(pr.E) == 0.0 && std::abs(rf.ll1) == 0.0)
        return psi_reference(k, pr.alpha, x);

    complex_t zt = std::pow(r, ap1) / ap1 - detail::action_tail(rf, r, tol);
    complex_t nu(1.0 / (2.0 * ap1), 0.0);
    Ledgered kv = mod_bessel_k_scaled(nu, zt);
    Ledgered km = mod_bessel_k_scaled(nu - 1.0, zt);
    Ledgered kp = mod_bessel_k_scaled(nu + 1.0, zt);
    complex_t kd = -0.5 * (km.value + kp.value);

    complex_t i(0.0, 1.0);
    complex_t eith = std::exp(i * th);
    complex_t q = rf.q(r);
    complex_t g = q / eith;                    // d ztilde / dx
    complex_t gp = rf.c1(r) / (2.0 * q) / (eith * eith);
    complex_t pref = std::exp(-i * (0.5 * pi_v) * static_cast<double>(k)) /
                     std::sqrt(ap1);
    complex_t gm12 = 1.0 / std::sqrt(g);
    complex_t zt12 = std::sqrt(zt);

    complex_t val = pref * gm12 * zt12 * kv.value;
    complex_t der = pref * (-0.5 * gm12 / g * gp * zt12 * kv.value +
                            gm12 * (0.5 / zt12 * g * kv.value + zt12 * kd * g));
    return SolutionSample{x, val, der, kv.ledger};
}

namespace detail {

// truncated asymptotic sum for e^{z} sqrt(2z/pi) K_mu(z); terms are added
// until they stop improving, which is ample for Re z >= 10
inline complex_t k_asym_sum(complex_t mu, complex_t z) {
    complex_t sum = 0.0, a = 1.0;
    double prev = 1e300;
    for (int n = 0; n < 48; ++n) {
        complex_t t = a;
        double m = std::abs(t);
        if (m > prev)
            break;
        sum += t;
        if (m < 1e-18 * std::abs(sum))
            break;
        prev = m;
        double h = n + 0.5;
        a *= (h - mu) * (h + mu) / (-2.0 * (n + 1.0) * z);
    }
    return sum;
}

// K_{nu-1}(z)/K_nu(z); prefactors cancel between the two sums
inline complex_t k_ratio_prev(complex_t nu, complex_t z) {
    return k_asym_sum(nu - 1.0, z) / k_asym_sum(nu, z);
}

// logarithmic derivative of z^{1/2} K_nu(z)
inline complex_t phi_logderiv(complex_t nu, complex_t z) {
    return 0.5 / z - nu / z - k_ratio_prev(nu, z);
}

// Ratio-frame march along the k-ray: u(t) solves u'' = c(t) u; we evolve
// Z = u / Phi with Phi = c^{-1/4} ztilde^{1/2} K_nu(ztilde), which obeys
//   Z'' = -2 (Phi'/Phi) Z' - Delta Z,
//   Delta = (5/16)(c'/c)^2 - (1/4) c''/c + c (nu^2 - 1/4)/ztilde^2,
// with ztilde carried as a third state, ztilde' = q = sqrt(c).
// The frame is exact, so no secular error accumulates over the huge
// outer phase; only the decaying transient limits the step size.
struct ZFrameState {
    complex_t Z, Zp, zt;
};

inline ZFrameState z_frame_march(const RayFrame& rf, complex_t nu, ZFrameState y0,
                                 double t0, double t1, double rel_tol) {
    double nu2m = (nu * nu - 0.25).real();
    auto rhs = [&](double t, const complex_t y[3], complex_t out[3]) {
        complex_t c = rf.c(t), c1 = rf.c1(t), c2 = rf.c2(t);
        complex_t q = std::sqrt(c);
        complex_t delta =
            (5.0 / 16.0) * (c1 / c) * (c1 / c) - 0.25 * c2 / c + c * nu2m / (y[2] * y[2]);
        complex_t lphi = -0.25 * c1 / c + q * phi_logderiv(nu, y[2]);
        out[0] = y[1];
        out[1] = -2.0 * lphi * y[1] - delta * y[0];
        out[2] = q;
    };

    complex_t y[3] = {y0.Z, y0.Zp, y0.zt};
    double t = t0;
    double dir = (t1 > t0) ? 1.0 : -1.0;
    double h = dir * std::min(0.5, 1.0 / std::sqrt(std::abs(rf.c(t0)) + 1.0));
    long steps = 0;
    complex_t k[7][3];
    while (dir * (t1 - t) > 0.0) {
        if (++steps > 80'000'000)
            throw integration_error("z_frame_march: step budget exhausted");
        if (dir * (t + h - t1) > 0.0)
            h = t1 - t;
        rhs(t, y, k[0]);
        for (int i = 1; i < 7; ++i) {
            complex_t yi[3] = {y[0], y[1], y[2]};
            for (int j = 0; j < i; ++j)
                for (int c3 = 0; c3 < 3; ++c3)
                    yi[c3] += h * dp_a[i][j] * k[j][c3];
            rhs(t + dp_c[i] * h, yi, k[i]);
        }
        complex_t y5[3] = {y[0], y[1], y[2]}, y4[3] = {y[0], y[1], y[2]};
        for (int j = 0; j < 7; ++j)
            for (int c3 = 0; c3 < 3; ++c3) {
                y5[c3] += h * dp_b5[j] * k[j][c3];
                y4[c3] += h * dp_b4[j] * k[j][c3];
            }
        double zs = std::max(1.0, std::abs(y[0]));
        double sc[3] = {std::abs(y[0]) + std::abs(h * k[0][0]) + 1e-6 * zs,
                        std::abs(y[1]) + std::abs(h * k[0][1]) + 1e-3 * zs,
                        std::abs(y[2]) + std::abs(h * k[0][2]) + 1e-290};
        double err = 0.0;
        for (int c3 = 0; c3 < 3; ++c3)
            err = std::max(err, std::abs(y5[c3] - y4[c3]) / sc[c3]);
        double ratio = err / rel_tol;
        if (ratio <= 1.0) {
            t += h;
            for (int c3 = 0; c3 < 3; ++c3)
                y[c3] = y5[c3];
        }
        double grow = (ratio > 0.0) ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw integration_error("z_frame_march: step size underflow");
    }
    return ZFrameState{y[0], y[1], y[2]};
}

// materialize (psi, psi') from the ratio frame at modulus t on the k-ray
inline SolutionSample z_frame_sample(const OscillatorParams& pr, int k,
                                     const RayFrame& rf, complex_t nu,
                                     const ZFrameState& st, double t) {
    double ap1 = pr.alpha + 1.0;
    double th = pi_v * (static_cast<double>(k) / ap1);
    complex_t i(0.0, 1.0);
    complex_t c = rf.c(t), c1 = rf.c1(t);
    complex_t q = std::sqrt(c);
    Ledgered kv = mod_bessel_k_scaled(nu, st.zt);
    complex_t phi = std::pow(q, -0.5) * std::sqrt(st.zt) * kv.value;
    complex_t lphi = -0.25 * c1 / c + q * phi_logderiv(nu, st.zt);
    complex_t pref = std::exp(-i * (0.5 * pi_v) * static_cast<double>(k)) *
                     std::exp(i * 0.5 * th) / std::sqrt(ap1);
    complex_t val = pref * phi * st.Z;
    complex_t der =
        pref * std::exp(-i * th) * phi * (lphi * st.Z + st.Zp);
    return SolutionSample{CoverPoint{std::log(t), th}, val, der, kv.ledger};
}

// hand-off radius: deep enough to save raw-integration phase, but still
// x^{2alpha}-dominated and inside the asymptotic regime of the K ratio
inline double switch_radius(const RayFrame& rf, double r_far, double tol) {
    double ap1 = rf.alpha + 1.0;
    double budget = std::clamp(1.3e13 * tol, 60.0, 400.0);
    double r_phase = std::pow(budget * ap1, 1.0 / ap1);
    double drive = 2.0 * std::max({std::abs(rf.Ek), std::abs(rf.ll1), 1.0});
    double r_dom = std::pow(drive, 1.0 / (2.0 * rf.alpha)) *
                   (1.0 + 0.45 / rf.alpha);
    double zmin_r = std::pow(20.0 * ap1, 1.0 / ap1);
    return std::min(r_far, std::max({r_phase, r_dom, zmin_r}));
}

inline double raw_step_tol(double tol) {
    return std::clamp(std::pow(0.074 * tol, 1.25), 3e-15, 1e-7);
}

} // namespace detail

/// Sibuya solution psi_k at x_target, by anchoring far out on the k-ray and
/// integrating inward (the subdominant direction is stable inward).
inline SolutionSample sibuya_at(const OscillatorParams& pr, int k,
                                const CoverPoint& x_target, double tol,
                                double anchor_override = 0.0,
                                bool arc_first = false) {
    double r_t = cover_abs(x_target);
    if (r_t < 0.05)
        throw std::domain_error("sibuya_at: |x| below the series handoff radius");
    double ap1 = pr.alpha + 1.0;
    double th_k = pi_v * (static_cast<double>(k) / ap1);
    if (std::abs(x_target.arg - th_k) > 1.6 * pi_v / ap1)
        throw geometry_error("sibuya_at: target outside the sector of psi_k");

    detail::RayFrame rf = detail::make_ray_frame(pr, k);
    double r_far = (anchor_override > 0.0) ? anchor_override : far_anchor(pr, tol, k);
    r_far = std::max(r_far, r_t);
    double raw_tol = detail::raw_step_tol(tol);
    auto V = [&pr](const CoverPoint& x) { return potential(pr, x); };

    SolutionSample y;
    double r_raw_from = r_far;
    bool pure = (std::abs(pr.E) == 0.0 && std::abs(rf.ll1) == 0.0);
    double r_sw = detail::switch_radius(rf, r_far, tol);
    if (pure) {
        // Psi_k is exact; no outer march needed at all
        r_raw_from = r_t;
        y = psi_reference(k, pr.alpha, CoverPoint{std::log(r_t), th_k});
    } else if (r_sw < r_far) {
        complex_t nu(1.0 / (2.0 * ap1), 0.0);
        complex_t zt_far = std::pow(r_far, ap1) / ap1 - detail::action_tail(rf, r_far, tol);
        detail::ZFrameState st{complex_t(1.0), complex_t(0.0), zt_far};
        st = detail::z_frame_march(rf, nu, st, r_far, r_sw, tol * 0.02);
        y = detail::z_frame_sample(pr, k, rf, nu, st, r_sw);
        r_raw_from = r_sw;
    } else {
        y = anchor_sample(pr, k, r_far, tol);
    }

    std::vector<PathSeg> path;
    if (!arc_first) {
        if (r_raw_from != r_t)
            path.push_back(PathSeg::radial(r_raw_from, r_t, th_k));
        if (x_target.arg != th_k)
            path.push_back(PathSeg::arc(th_k, x_target.arg, r_t));
    } else {
        if (x_target.arg != th_k)
            path.push_back(PathSeg::arc(th_k, x_target.arg, r_raw_from));
        if (r_raw_from != r_t)
            path.push_back(PathSeg::radial(r_raw_from, r_t, x_target.arg));
    }
    if (path.empty())
        return y;
    return integrate_path(V, y, path, raw_tol);
}

/// psi_m via the cover rotation of psi_0:
///   psi_m(x; E) = e^{-im pi/2} e^{im pi/(2a+2)} psi_0(x e^{-im pi/(a+1)};
///                                                     E e^{2im pi/(a+1)}).
inline SolutionSample sibuya_rotated(const OscillatorParams& pr, int m,
                                     const CoverPoint& x, double tol) {
    if (m == 0)
        return sibuya_at(pr, 0, x, tol);
    double ap1 = pr.alpha + 1.0;
    complex_t i(0.0, 1.0);
    complex_t Erot = pr.E * std::exp(i * (2.0 * pi_v) * (static_cast<double>(m) / ap1));
    OscillatorParams prr(pr.alpha, Erot, pr.ell);
    CoverPoint xr = cover_rotate(x, -m, pr.alpha);
    SolutionSample s0 = sibuya_at(prr, 0, xr, tol);
    complex_t rot = std::exp(-i * pi_v * (static_cast<double>(m) / ap1));
    complex_t pref = std::exp(-i * (0.5 * pi_v) * static_cast<double>(m)) *
                     std::exp(i * (0.5 * pi_v) * (static_cast<double>(m) / ap1));
    return SolutionSample{x, pref * s0.value, pref * rot * s0.derivative, s0.ledger};
}

} // namespace specdet
