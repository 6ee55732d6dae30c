#pragma once

#include <cstddef>
#include <functional>

#include "fracspec/types.hpp"

namespace fracspec {

/// Order of a fractional operator, restricted to (0, 1].
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha);

    [[nodiscard]] double value() const noexcept { return alpha_; }
    [[nodiscard]] bool is_integer() const noexcept { return alpha_ == 1.0; }

private:
    double alpha_;
};

/// A vector-valued function sampled on the uniform grid t_j = j*dt, j = 0..m.
///
/// Samples are stored column-wise: column j holds the d-dimensional value at
/// t_j. `degree` records the polynomial weight (1+t)^n the signal is judged
/// against; it does not alter the samples.
class SampledSignal {
public:
    SampledSignal(double dt, CMatrix values, int degree = 0);

    /// Samples fn(t_j) for j = 0..steps.
    static SampledSignal from_function(double dt, std::size_t steps, Eigen::Index dim,
                                       const std::function<CVector(double)>& fn,
                                       int degree = 0);

    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return values_.rows(); }
    /// Number of samples (m + 1).
    [[nodiscard]] std::size_t size() const noexcept {
        return static_cast<std::size_t>(values_.cols());
    }
    [[nodiscard]] double time(std::size_t j) const noexcept {
        return static_cast<double>(j) * dt_;
    }
    [[nodiscard]] double t_max() const noexcept { return time(size() - 1); }

    [[nodiscard]] auto at(std::size_t j) const { return values_.col(static_cast<Eigen::Index>(j)); }
    [[nodiscard]] auto at(std::size_t j) { return values_.col(static_cast<Eigen::Index>(j)); }

    [[nodiscard]] const CMatrix& values() const noexcept { return values_; }
    [[nodiscard]] CMatrix& values() noexcept { return values_; }

    [[nodiscard]] SampledSignal with_degree(int degree) const;
    /// First `count` samples.
    [[nodiscard]] SampledSignal head(std::size_t count) const;

    /// True when both signals share dt (to 1e-12 relative), length and dimension.
    [[nodiscard]] bool same_grid(const SampledSignal& other) const noexcept;

private:
    double dt_;
    CMatrix values_;
    int degree_;
};

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b);
SampledSignal operator-(const SampledSignal& a, const SampledSignal& b);
SampledSignal operator*(cplx c, const SampledSignal& a);

}  // namespace fracspec
