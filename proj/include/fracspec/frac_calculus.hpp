#pragma once

#include <cstddef>
#include <vector>

#include "fracspec/signal.hpp"

namespace fracspec {

/// Product-trapezoid weights for ∫_0^{t_j} g_α(t_j − s) h(s) ds on a uniform
/// grid, exact when h is piecewise linear:
///
///   (J^α h)(t_j) ≈ first(j)·h_0 + Σ_{k=1}^{j} lag(j − k)·h_k,   j ≥ 1,
///
/// and 0 at j = 0. The kernel singularity at s = t_j is integrated
/// analytically, so g_α(0) is never evaluated.
class ProductWeights {
public:
    ProductWeights(double alpha, double dt, std::size_t steps);

    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t steps() const noexcept { return lag_.size() - 1; }

    /// Weight of h_0 in the value at t_j (j ≥ 1).
    [[nodiscard]] double first(std::size_t j) const noexcept { return first_[j]; }
    /// Weight of h_k in the value at t_j, as a function of j − k (k ≥ 1).
    [[nodiscard]] double lag(std::size_t m) const noexcept { return lag_[m]; }

    [[nodiscard]] const std::vector<double>& first_weights() const noexcept { return first_; }
    [[nodiscard]] const std::vector<double>& lag_weights() const noexcept { return lag_; }

    /// Applies the rule to the columns of `samples` (d × (steps+1)).
    [[nodiscard]] CMatrix apply(const CMatrix& samples) const;

private:
    double alpha_;
    double dt_;
    std::vector<double> first_;
    std::vector<double> lag_;
};

/// Product-rectangle (left point) weights dt^α/Γ(α+1)·((m+1)^α − m^α), m ≥ 0,
/// used by the fractional Adams predictor.
std::vector<double> rectangle_weights(double alpha, double dt, std::size_t steps);

/// Riemann–Liouville integral J^α f on the grid of f.
SampledSignal frac_integral(const SampledSignal& f, FractionalOrder alpha);

/// Second-order finite-difference derivative (one-sided at both ends).
SampledSignal grid_derivative(const SampledSignal& f);

/// Caputo derivative D^α f = J^(1−α) f' for α < 1, f' for α = 1.
SampledSignal caputo_derivative(const SampledSignal& f, FractionalOrder alpha);

}  // namespace fracspec
