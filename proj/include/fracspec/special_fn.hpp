#pragma once

#include "fracspec/types.hpp"

namespace fracspec {

/// λ^α = |λ|^α exp(iα arg λ) with arg λ in (−π, π).
///
/// The branch cut is the closed negative real axis, zero included; bases on
/// the cut are rejected with BranchCutViolation rather than assigned a side.
cplx principal_power(cplx lambda, double alpha);

/// g_α(t) = t^(α−1) / Γ(α) for t > 0, α > 0.
double kernel_g(double alpha, double t);

/// Γ(a, x) = ∫_x^∞ s^(a−1) e^(−s) ds for real a ≥ 0, x ≥ 0 (not both zero).
double upper_incomplete_gamma(double a, double x);

struct MittagLefflerOptions {
    /// Taylor series is attempted for |z| ≤ taylor_radius.
    double taylor_radius = 5.0;
    /// Asymptotic expansion is attempted for |z| ≥ asymptotic_radius, and also
    /// once the poles |s| = |z|^(1/α) are this far out (its error is ~e^(−|s|)).
    double asymptotic_radius = 15.0;
    double asymptotic_pole_radius = 30.0;
    /// Relative accuracy each regime must certify before its result is accepted.
    double tolerance = 1e-12;
};

/// Two-parameter Mittag-Leffler function E_{α,β}(z) = Σ z^k / Γ(αk + β).
///
/// Three regimes: Taylor series with a running error bound near the origin,
/// the asymptotic expansion far out, and a Hankel contour deformed onto two
/// rays (plus pole residues) everywhere else. A regime that cannot certify
/// `tolerance` hands over to the contour; ConvergenceFailure is raised only
/// when the contour itself cannot.
cplx mittag_leffler(double alpha, double beta, cplx z, const MittagLefflerOptions& options = {});

/// Laplace transform of (1+t)^n at s, Re s > 0:
/// F(s) = e^s Γ(n+1, s) / s^(n+1) = (n!/s^(n+1)) Σ_{k=0}^n s^k/k!.
/// Evaluated with the finite sum.
cplx weight_laplace(int n, cplx s);

/// Real-argument form of the weight Laplace transform,
/// e^x Γ(n+1, x) / x^(n+1); this is the Re λ > 0 resolvent norm bound.
double weight_laplace_bound(int n, double x);

}  // namespace fracspec
