#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "fracspec/signal.hpp"

namespace fracspec {

/// Relative size of the discarded tail of ∫_t^∞ that resolvent_apply and
/// laplace_transform accept: e^{−Re λ (T − t)} (1+T)^n < kTailTolerance.
inline constexpr double kTailTolerance = 1e-10;

/// Largest grid index t_j for which the truncated tail at Re λ meets
/// kTailTolerance, or nullopt when even t = 0 fails.
std::optional<std::size_t> report_limit(const SampledSignal& f, double re_lambda, int n);

/// The n-bounded representative y of (λ − d/dt)^{-1} f, i.e. λy − y' = f.
///
/// Re λ > 0: y(t) = ∫_t^∞ e^{λ(t−s)} f(s) ds, truncated at the grid end; the
/// result only covers grid points that satisfy the tail criterion.
/// Re λ < 0: y(t) = −∫_0^t e^{λ(t−s)} f(s) ds on the whole grid.
/// Both integrals are exact for piecewise-linear f.
SampledSignal resolvent_apply(const SampledSignal& f, cplx lambda, int n);

/// ℒf(λ) = ∫_0^∞ e^{−λt} f(t) dt for Re λ > 0, with the tail criterion taken
/// at the signal's own degree. Uses the same piecewise-linear rule as
/// resolvent_apply, so the two agree at t = 0 up to rounding.
CVector laplace_transform(const SampledSignal& f, cplx lambda);

struct PoleTerm {
    cplx location;
    int order;
};

/// F(z) = P(z) + Q(z) / Π_k (z − p_k)^{m_k} with C^d-valued polynomial
/// coefficients (lowest degree first).
class RationalFunction {
public:
    RationalFunction(std::vector<CVector> polynomial, std::vector<CVector> numerator,
                     std::vector<PoleTerm> poles);

    /// Scalar (d = 1) convenience constructor.
    static RationalFunction scalar(std::vector<cplx> polynomial, std::vector<cplx> numerator,
                                   std::vector<PoleTerm> poles);

    [[nodiscard]] Eigen::Index dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<PoleTerm>& poles() const noexcept { return poles_; }

    [[nodiscard]] CVector operator()(cplx z) const;

private:
    std::vector<CVector> polynomial_;
    std::vector<CVector> numerator_;
    std::vector<PoleTerm> poles_;
    Eigen::Index dim_;
};

/// A function holomorphic off the imaginary axis: either a rational function
/// (evaluable off its poles) or the Laplace transform of a sampled signal
/// (evaluable for Re λ > 0 only).
class HolomorphicHandle {
public:
    enum class Kind { Rational, LaplaceOfSignal };

    static HolomorphicHandle rational(RationalFunction f);
    static HolomorphicHandle laplace_of(SampledSignal f, int n);

    [[nodiscard]] Kind kind() const noexcept;
    [[nodiscard]] const RationalFunction& as_rational() const;
    [[nodiscard]] CVector evaluate(cplx lambda) const;

private:
    explicit HolomorphicHandle(std::variant<RationalFunction, SampledSignal> impl)
        : impl_(std::move(impl)) {}

    std::variant<RationalFunction, SampledSignal> impl_;
};

/// Laurent coefficients a_k around iξ from the circle |z − iξ| = r.
struct LaurentExpansion {
    double center_xi;
    double radius;
    int quad_points;
    std::map<int, CVector> coefficients;

    /// Throws MissingCoefficient when k was not computed.
    [[nodiscard]] const CVector& coefficient(int k) const;
};

/// Trapezoidal contour quadrature of a_k = (1/2πi)∮ F(z)(z − iξ)^{−k−1} dz for
/// k in [k_min, k_max]. Only Rational handles are accepted. Raises
/// SingularityTooClose when another pole sits in the closed disk or when
/// doubling quad_points moves the coefficients.
LaurentExpansion laurent_coefficients(const HolomorphicHandle& f, double xi, double r, int k_min,
                                      int k_max, int quad_points);

/// ‖Σ_{j=0}^N C(N,j) r^{2N−2j} a_{k−2j}‖ − 2^N M r^{N−k}.
///
/// Non-positive whenever ‖F(z)‖ ≤ M/|Re z|^N holds on the circle.
double laurent_bound_residual(const LaurentExpansion& expansion, int N, double M, int k);

struct ScanPoint {
    double xi;
    /// 0 when regular, otherwise the estimated pole order in [1, n+1].
    int order;
    double fit_slope;
};

/// For each ξ, least-squares slope of log‖ℒf(η + iξ)‖ against log η over
/// `etas`; slope ≤ −0.5 marks ξ singular with order round(−slope) clamped to
/// [1, n+1]. A heuristic, not a decision procedure.
std::vector<ScanPoint> singularity_scan(const SampledSignal& f, int n, std::span<const double> xi_grid,
                                        std::span<const double> etas);

/// Diagnostic for the limit of η-scaled resolvent values as η ↓ 0.
struct ErgodicDiagnostic {
    std::vector<double> eta_values;
    std::vector<double> scaled_norms;
    double extrapolated_limit = 0.0;
    /// Last two norms differ by less than 1e-3.
    bool converged = false;
    /// Norms grow at least like η^{-1/2} over the last step.
    bool divergent = false;
};

/// Limit estimate from norms along a decreasing η sequence. With three or
/// more points the rate is estimated from the last three (Aitken); with two,
/// first-order Richardson in η. Estimates are clamped at 0.
ErgodicDiagnostic extrapolate_ergodic(std::vector<double> etas, std::vector<double> norms);

/// η_k = 0.5^k, k = 1..10.
std::vector<double> default_eta_sequence();

/// The subset of `etas` for which the tail criterion at weight n leaves at
/// least `min_report_fraction` of the grid reportable.
std::vector<double> admissible_etas(const SampledSignal& f, int n, std::span<const double> etas,
                                    double min_report_fraction = 0.25);

/// The subset of `etas` at which laplace_transform(f.with_degree(n), η + iξ)
/// meets the tail criterion.
std::vector<double> laplace_admissible_etas(const SampledSignal& f, int n, std::span<const double> etas);

struct SignalErgodicMean {
    SampledSignal mean;
    ErgodicDiagnostic diagnostic;
};

/// η·(η + iζ − d/dt)^{-1} f along `etas`; the returned mean is the last iterate.
SignalErgodicMean ergodic_mean_signal(const SampledSignal& f, int n, double zeta,
                                      std::span<const double> etas);

}  // namespace fracspec
