#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <utility>

#include "specdet/cover.hpp"
#include "specdet/errors.hpp"

namespace specdet {

/// Parameters of the oscillator x^{2 alpha} + l(l+1)/x^2 - E.
/// The half-plane restriction Re(ell) > -1/2 uses the l -> -l-1 symmetry;
/// the boundary line is rejected.
struct OscillatorParams {
    double alpha;
    complex_t E;
    complex_t ell;

    OscillatorParams(double alpha_, complex_t E_, complex_t ell_)
        : alpha(alpha_), E(E_), ell(ell_) {
        if (!(alpha > 0.0))
            throw std::domain_error("OscillatorParams: alpha must be positive");
        if (!(ell.real() > -0.5))
            throw std::domain_error("OscillatorParams: Re(ell) must exceed -1/2");
    }
};

/// Rescaled parameterization E = 4 p^2 (alpha+1)^2 eps^2,
/// ell = 2 p (alpha+1) - 1/2; optionally eps = 1 + eta/(alpha+1)^{2/3}.
struct RescaledParams {
    double alpha;
    complex_t eps;
    complex_t p;
    std::optional<complex_t> eta;

    RescaledParams(double alpha_, complex_t eps_, complex_t p_)
        : alpha(alpha_), eps(eps_), p(p_) {
        validate();
    }

    static RescaledParams from_eta(double alpha_, complex_t eta_, complex_t p_) {
        complex_t eps_ = 1.0 + eta_ / std::pow(alpha_ + 1.0, 2.0 / 3.0);
        RescaledParams rp(alpha_, eps_, p_);
        rp.eta = eta_;
        return rp;
    }

private:
    void validate() const {
        if (!(alpha > 0.0))
            throw std::domain_error("RescaledParams: alpha must be positive");
        if (p == complex_t(0.0))
            throw std::domain_error("RescaledParams: p must be nonzero");
        if (!(p.real() > 0.0))
            throw std::domain_error("RescaledParams: Re(p) must be positive");
    }
};

inline OscillatorParams rescale_params(const RescaledParams& rp) {
    double ap1 = rp.alpha + 1.0;
    complex_t E = 4.0 * rp.p * rp.p * ap1 * ap1 * rp.eps * rp.eps;
    complex_t ell = 2.0 * rp.p * ap1 - 0.5;
    return OscillatorParams(rp.alpha, E, ell);
}

/// V(x) = x^{2 alpha} + l(l+1)/x^2 - E, evaluated from the cover lift.
inline complex_t potential(const OscillatorParams& pr, const CoverPoint& x) {
    complex_t x2a = cover_project(cover_pow(x, 2.0 * pr.alpha));
    complex_t inv2 = cover_project(cover_pow(x, -2.0));
    return x2a + pr.ell * (pr.ell + 1.0) * inv2 - pr.E;
}

/// dV/dx, needed by anchor placement and WKB amplitudes.
inline complex_t potential_dx(const OscillatorParams& pr, const CoverPoint& x) {
    complex_t x2am1 = cover_project(cover_pow(x, 2.0 * pr.alpha - 1.0));
    complex_t inv3 = cover_project(cover_pow(x, -3.0));
    return 2.0 * pr.alpha * x2am1 - 2.0 * pr.ell * (pr.ell + 1.0) * inv3;
}

/// Vhat(x) = (1 - (eps x)^2)/x^2 + x^{2 alpha} / (4 p^2 (alpha+1)^2).
inline complex_t rescaled_potential(const RescaledParams& rp, const CoverPoint& x) {
    double ap1 = rp.alpha + 1.0;
    complex_t inv2 = cover_project(cover_pow(x, -2.0));
    complex_t x2a = cover_project(cover_pow(x, 2.0 * rp.alpha));
    return inv2 - rp.eps * rp.eps + x2a / (4.0 * rp.p * rp.p * ap1 * ap1);
}

inline complex_t rescaled_potential_dx(const RescaledParams& rp, const CoverPoint& x) {
    double ap1 = rp.alpha + 1.0;
    complex_t inv3 = cover_project(cover_pow(x, -3.0));
    complex_t x2am1 = cover_project(cover_pow(x, 2.0 * rp.alpha - 1.0));
    return -2.0 * inv3 + 2.0 * rp.alpha * x2am1 / (4.0 * rp.p * rp.p * ap1 * ap1);
}

/// Quantum monodromy action on a point and the parameter record:
/// x -> x e^{i pi/(alpha+1)}, E -> E e^{-2 i pi/(alpha+1)}, ell unchanged.
inline std::pair<CoverPoint, OscillatorParams>
monodromy_transform(const OscillatorParams& pr, const CoverPoint& x) {
    CoverPoint xr = cover_rotate(x, 1, pr.alpha);
    complex_t rot = std::exp(complex_t(0.0, -2.0 * pi_v / (pr.alpha + 1.0)));
    return {xr, OscillatorParams(pr.alpha, pr.E * rot, pr.ell)};
}

/// Sector bookkeeping.  Sigma_k is the open sector of half-width
/// pi/(2(alpha+1)) around arg x = k pi/(alpha+1); S_k is three Sigma widths.
struct SectorIndex {
    int k = 0;
};

inline std::pair<double, double> sigma_bounds(int k, double alpha) {
    double h = 0.5 * pi_v / (alpha + 1.0);
    return {(2 * k - 1) * h, (2 * k + 1) * h};
}

inline bool in_sigma(int k, double alpha, const CoverPoint& x) {
    auto [lo, hi] = sigma_bounds(k, alpha);
    return x.arg > lo && x.arg < hi;
}

inline bool in_s_sector(int k, double alpha, const CoverPoint& x) {
    double h = 0.5 * pi_v / (alpha + 1.0);
    return x.arg > (2 * k - 3) * h && x.arg < (2 * k + 3) * h;
}

/// Distance from the resonance lattice {i + alpha j : i, j >= 0}.
inline double lambda_lattice_distance(complex_t w, double alpha) {
    if (w.real() < -0.5)
        return std::abs(w);
    double best = std::abs(w);
    int jmax = static_cast<int>(std::max(1.0, w.real() / alpha)) + 2;
    for (int j = 0; j <= jmax; ++j) {
        double base = alpha * j;
        double i = std::round(w.real() - base);
        for (double di : {-1.0, 0.0, 1.0}) {
            double ii = i + di;
            if (ii < 0.0)
                continue;
            best = std::min(best, std::abs(w - complex_t(ii + base, 0.0)));
        }
    }
    return best;
}

/// Both resonance readings are surfaced: the lattice may be compared against
/// ell or against ell + 1/2.  Either proximity flags the parameter point.
struct ResonanceCheck {
    double dist_ell;
    double dist_ell_half;
    bool flagged;
};

inline ResonanceCheck check_resonance(complex_t ell, double alpha,
                                      double window = 1e-8) {
    double d1 = lambda_lattice_distance(ell, alpha);
    double d2 = lambda_lattice_distance(ell + 0.5, alpha);
    double thr = window * (1.0 + std::norm(ell));
    return ResonanceCheck{d1, d2, d1 < thr || d2 < thr};
}

} // namespace specdet
