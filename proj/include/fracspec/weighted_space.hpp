#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "fracspec/signal.hpp"

namespace fracspec {

/// (1+t)^n
double weight(double t, int n);

/// ‖f‖_n = max_j ‖f(t_j)‖ / (1+t_j)^n over the grid (Euclidean vector norm).
double weighted_norm(const SampledSignal& f, int n);

struct ContinuityModulus {
    double value;
    /// h after rounding to the nearest multiple of dt.
    double h_used;
};

/// sup_j ‖f(t_j + h) − f(t_j)‖ / (1+t_j)^n over indices where t_j + h is on the grid.
ContinuityModulus continuity_modulus(const SampledSignal& f, int n, double h);

/// Left shift S(τ)f = f(τ + ·); τ must be a multiple of dt and leave at least
/// one sample.
SampledSignal translate(const SampledSignal& f, double t_shift);

enum class DecayClass { Decayed, NotDecayed, Inconclusive };

std::string_view to_string(DecayClass c);

struct WindowSup {
    double window_start;
    double sup_value;
};

/// Windowed weighted sups over the tail of a signal, with a three-way verdict.
///
/// Decayed: last window below tolerance and the last three windows trend
/// downward (sups under 1e-3 × tolerance count as flat, so rounding noise on
/// a decayed tail does not break the trend). NotDecayed: last window at least
/// 10x tolerance and no shrinkage across the tail (last > 0.9 * first).
/// Everything else is Inconclusive.
struct DecayReport {
    std::vector<WindowSup> window_sups;
    DecayClass verdict;
    double tail_estimate;
    /// last window sup ≤ 0.9 × first tail window sup
    bool tail_shrinking;
};

struct DecayOptions {
    std::size_t window_count = 5;
    double decay_tolerance = 1e-2;
    /// Fraction of the grid, counted from the end, that forms the tail.
    double tail_fraction = 0.5;
};

DecayReport decay_profile(const SampledSignal& f, int n, const DecayOptions& options = {});

inline DecayReport decay_profile(const SampledSignal& f, int n, std::size_t window_count,
                                 double decay_tolerance) {
    return decay_profile(f, n, DecayOptions{window_count, decay_tolerance, 0.5});
}

}  // namespace fracspec
