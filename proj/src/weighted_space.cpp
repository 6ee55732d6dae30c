#include "fracspec/weighted_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracspec/errors.hpp"

namespace fracspec {

namespace {

std::size_t grid_index(double value, double dt, const char* what) {
    const double k = value / dt;
    const double rounded = std::nearbyint(k);
    if (std::abs(k - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw DomainError(std::string(what) + " must be a multiple of the grid step");
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace

double weight(double t, int n) {
    return std::pow(1.0 + t, n);
}

double weighted_norm(const SampledSignal& f, int n) {
    double sup = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        sup = std::max(sup, f.at(j).norm() / weight(f.time(j), n));
    }
    return sup;
}

ContinuityModulus continuity_modulus(const SampledSignal& f, int n, double h) {
    if (!(h > 0.0)) {
        throw DomainError("continuity modulus needs h > 0");
    }
    const auto k = static_cast<std::size_t>(std::llround(h / f.dt()));
    if (k == 0) {
        throw DomainError("h rounds to zero grid steps");
    }
    if (k >= f.size()) {
        throw DomainError("h exceeds the grid span");
    }
    double sup = 0.0;
    for (std::size_t j = 0; j + k < f.size(); ++j) {
        sup = std::max(sup, (f.at(j + k) - f.at(j)).norm() / weight(f.time(j), n));
    }
    return {sup, static_cast<double>(k) * f.dt()};
}

SampledSignal translate(const SampledSignal& f, double t_shift) {
    if (t_shift < 0.0) {
        throw DomainError("translation amount must be non-negative");
    }
    const std::size_t k = grid_index(t_shift, f.dt(), "shift");
    if (k >= f.size()) {
        throw DomainError("shift exceeds the grid span");
    }
    const auto keep = static_cast<Eigen::Index>(f.size() - k);
    return SampledSignal(f.dt(), f.values().rightCols(keep), f.degree());
}

std::string_view to_string(DecayClass c) {
    switch (c) {
        case DecayClass::Decayed: return "Decayed";
        case DecayClass::NotDecayed: return "NotDecayed";
        case DecayClass::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

DecayReport decay_profile(const SampledSignal& f, int n, const DecayOptions& options) {
    if (options.window_count < 3) {
        throw DomainError("decay_profile needs at least 3 windows");
    }
    if (!(options.tail_fraction > 0.0 && options.tail_fraction <= 1.0)) {
        throw DomainError("tail fraction must lie in (0, 1]");
    }
    const std::size_t last = f.size() - 1;
    const auto start = static_cast<std::size_t>(
        std::floor(static_cast<double>(last) * (1.0 - options.tail_fraction)));
    const std::size_t tail = last - start + 1;
    if (tail < options.window_count) {
        throw TooFewPoints("grid tail too short for the requested window count");
    }

    DecayReport report;
    report.window_sups.reserve(options.window_count);
    for (std::size_t w = 0; w < options.window_count; ++w) {
        const std::size_t lo = start + w * tail / options.window_count;
        const std::size_t hi = start + (w + 1) * tail / options.window_count;
        double sup = 0.0;
        for (std::size_t j = lo; j < hi; ++j) {
            sup = std::max(sup, f.at(j).norm() / weight(f.time(j), n));
        }
        report.window_sups.push_back({f.time(lo), sup});
    }

    const auto& s = report.window_sups;
    const double first = s.front().sup_value;
    const double final = s.back().sup_value;
    const double s1 = s[s.size() - 3].sup_value;
    const double s2 = s[s.size() - 2].sup_value;
    const double tol = options.decay_tolerance;
    const double floor = 1e-3 * tol;
    auto not_above = [floor](double later, double earlier) {
        return std::max(later, floor) <= std::max(earlier, floor) * (1.0 + 1e-12);
    };
    const bool trend = not_above(final, s1) && (not_above(s2, s1) || not_above(final, s2));

    report.tail_estimate = final;
    report.tail_shrinking = final <= 0.9 * first;
    if (final < tol && trend) {
        report.verdict = DecayClass::Decayed;
    } else if (final < 10.0 * tol || report.tail_shrinking) {
        report.verdict = DecayClass::Inconclusive;
    } else {
        report.verdict = DecayClass::NotDecayed;
    }
    return report;
}

}  // namespace fracspec
