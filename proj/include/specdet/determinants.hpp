#pragma once

#include <cmath>
#include <complex>

#include "specdet/frobenius.hpp"
#include "specdet/oscillator.hpp"
#include "specdet/sibuya.hpp"

namespace specdet {

struct DeterminantValue {
    OscillatorParams params;
    int branch; // +1 / -1
    complex_t value{};
    double error_estimate = 0.0;
};

struct StokesValue {
    OscillatorParams params;
    int k;
    complex_t value{};
};

/// W[a, b] = a b' - a' b at a common point, ledgers combined.
inline complex_t wronskian(const SolutionSample& a, const SolutionSample& b) {
    if (!(a.x == b.x))
        throw std::invalid_argument("wronskian: samples at different points");
    return (a.value * b.derivative - a.derivative * b.value) *
           std::exp(a.ledger + b.ledger);
}

/// Spectral determinant for the central connection problem,
/// Q_± = W[psi_0, chi_±], evaluated by default at the matching point x = 1.
inline DeterminantValue q_det(const OscillatorParams& pr, int branch, double tol,
                              double x_match = 1.0) {
    CoverPoint xm = cover_from_polar(x_match, 0.0);
    SolutionSample psi = sibuya_at(pr, 0, xm, tol);
    SolutionSample chi = chi_reach(pr, branch, xm, tol);
    complex_t q = wronskian(psi, chi);
    double scale = (std::abs(psi.value) * std::abs(chi.derivative) +
                    std::abs(psi.derivative) * std::abs(chi.value)) *
                   std::exp(psi.ledger + chi.ledger);
    return DeterminantValue{pr, branch, q, 2.0 * tol * scale};
}

/// Stokes multiplier sigma_k, with both neighbors obtained through the
/// rotation identity so their normalizations track psi_0 exactly.  The sign
/// convention is fixed by the TQ relation and the -2i large-degree limit:
/// sigma_k = (-1)^k (alpha+1)/pi W[psi_{k+1}, psi_{k-1}].
inline StokesValue stokes(const OscillatorParams& pr, int k, double tol) {
    if (std::abs(k) > 1)
        throw std::domain_error("stokes: only |k| <= 1 supported");
    CoverPoint xm = cover_from_polar(1.0, pi_v * (static_cast<double>(k) / (pr.alpha + 1.0)));
    SolutionSample pm = sibuya_rotated(pr, k - 1, xm, tol);
    SolutionSample pp = sibuya_rotated(pr, k + 1, xm, tol);
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    complex_t s = sign * (pr.alpha + 1.0) / pi_v * wronskian(pp, pm);
    return StokesValue{pr, k, s};
}

namespace detail {

inline OscillatorParams rotate_energy(const OscillatorParams& pr, double halfturns) {
    complex_t rot = std::exp(complex_t(0.0, pi_v * halfturns / (pr.alpha + 1.0)));
    return OscillatorParams(pr.alpha, pr.E * rot, pr.ell);
}

} // namespace detail

struct ResidualValue {
    complex_t residual{};
    double scale = 0.0; // magnitude of the largest contributing term
};

/// Residual of i sigma_0 Q_±(E) = e^{-i pi s} Q_±(E e^{-2pi i/(a+1)})
///                               + e^{+i pi s} Q_±(E e^{+2pi i/(a+1)}),
/// s = (l + 1/2)/(alpha+1).
inline ResidualValue tq_residual(const OscillatorParams& pr, int branch, double tol) {
    complex_t i(0.0, 1.0);
    complex_t s = (pr.ell + 0.5) / (pr.alpha + 1.0);
    complex_t q0 = q_det(pr, branch, tol).value;
    complex_t qm = q_det(detail::rotate_energy(pr, -2.0), branch, tol).value;
    complex_t qp = q_det(detail::rotate_energy(pr, +2.0), branch, tol).value;
    complex_t s0 = stokes(pr, 0, tol).value;
    complex_t lhs = i * s0 * q0;
    complex_t r1 = std::exp(-i * pi_v * s) * qm;
    complex_t r2 = std::exp(i * pi_v * s) * qp;
    complex_t res = lhs - r1 - r2;
    double scale = std::max({std::abs(lhs), std::abs(r1), std::abs(r2)});
    return ResidualValue{res, scale};
}

/// Residual of the quantum Wronskian identity
///   e^{+i pi s} Q_+(E e^{+i pi/(a+1)}) Q_-(E e^{-i pi/(a+1)})
/// - e^{-i pi s} Q_-(E e^{+i pi/(a+1)}) Q_+(E e^{-i pi/(a+1)})
/// = 2 i sin(pi s).
inline ResidualValue quantum_wronskian_residual(const OscillatorParams& pr,
                                                double tol) {
    complex_t i(0.0, 1.0);
    complex_t s = (pr.ell + 0.5) / (pr.alpha + 1.0);
    OscillatorParams prp = detail::rotate_energy(pr, +1.0);
    OscillatorParams prm = detail::rotate_energy(pr, -1.0);
    complex_t qpp = q_det(prp, +1, tol).value;
    complex_t qpm = q_det(prm, +1, tol).value;
    complex_t qmp = q_det(prp, -1, tol).value;
    complex_t qmm = q_det(prm, -1, tol).value;
    complex_t t1 = std::exp(i * pi_v * s) * qpp * qmm;
    complex_t t2 = std::exp(-i * pi_v * s) * qmp * qpm;
    complex_t rhs = 2.0 * i * std::sin(pi_v * s);
    complex_t res = t1 - t2 - rhs;
    double scale = std::max({std::abs(t1), std::abs(t2), std::abs(rhs)});
    return ResidualValue{res, scale};
}

/// Bethe equation residual at a certified zero E0 of Q_+:
///   e^{4 i pi p} Q_+(E0 e^{+2 i pi/(a+1)}) / Q_+(E0 e^{-2 i pi/(a+1)}) + 1,
/// with p = (l + 1/2)/(2(alpha+1)).
inline ResidualValue bethe_residual(const OscillatorParams& pr_at_zero, double tol) {
    complex_t q0 = q_det(pr_at_zero, +1, tol).value;
    complex_t qp = q_det(detail::rotate_energy(pr_at_zero, +2.0), +1, tol).value;
    complex_t qm = q_det(detail::rotate_energy(pr_at_zero, -2.0), +1, tol).value;
    double scale = std::max(std::abs(qp), std::abs(qm));
    if (std::abs(q0) > 1e-4 * scale)
        throw std::invalid_argument("bethe_residual: E is not a certified zero of Q+");
    complex_t i(0.0, 1.0);
    complex_t p = (pr_at_zero.ell + 0.5) / (2.0 * (pr_at_zero.alpha + 1.0));
    complex_t res = std::exp(4.0 * i * pi_v * p) * qp / qm + 1.0;
    return ResidualValue{res, 1.0};
}

} // namespace specdet
