#include "fracspec/signal.hpp"

#include <cmath>
#include <string>

#include "fracspec/errors.hpp"

namespace fracspec {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("fractional order must lie in (0, 1], got " + std::to_string(alpha));
    }
}

SampledSignal::SampledSignal(double dt, CMatrix values, int degree)
    : dt_(dt), values_(std::move(values)), degree_(degree) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw GridError("grid step must be positive and finite");
    }
    if (values_.cols() == 0 || values_.rows() == 0) {
        throw GridError("signal must hold at least one sample of positive dimension");
    }
    if (degree < 0) {
        throw DomainError("weight degree must be non-negative");
    }
}

SampledSignal SampledSignal::from_function(double dt, std::size_t steps, Eigen::Index dim,
                                           const std::function<CVector(double)>& fn,
                                           int degree) {
    CMatrix values(dim, static_cast<Eigen::Index>(steps + 1));
    for (std::size_t j = 0; j <= steps; ++j) {
        CVector v = fn(static_cast<double>(j) * dt);
        if (v.size() != dim) {
            throw GridError("sampled function returned a vector of the wrong dimension");
        }
        values.col(static_cast<Eigen::Index>(j)) = v;
    }
    return SampledSignal(dt, std::move(values), degree);
}

SampledSignal SampledSignal::with_degree(int degree) const {
    return SampledSignal(dt_, values_, degree);
}

SampledSignal SampledSignal::head(std::size_t count) const {
    if (count == 0 || count > size()) {
        throw GridError("head length out of range");
    }
    return SampledSignal(dt_, values_.leftCols(static_cast<Eigen::Index>(count)), degree_);
}

bool SampledSignal::same_grid(const SampledSignal& other) const noexcept {
    return size() == other.size() && dim() == other.dim() &&
           std::abs(dt_ - other.dt_) <= 1e-12 * dt_;
}

namespace {
void require_same_grid(const SampledSignal& a, const SampledSignal& b) {
    if (!a.same_grid(b)) {
        throw GridMismatch("signals live on different grids");
    }
}
}  // namespace

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b) {
    require_same_grid(a, b);
    return SampledSignal(a.dt(), a.values() + b.values(), a.degree());
}

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
    require_same_grid(a, b);
    return SampledSignal(a.dt(), a.values() - b.values(), a.degree());
}

SampledSignal operator*(cplx c, const SampledSignal& a) {
    return SampledSignal(a.dt(), c * a.values(), a.degree());
}

}  // namespace fracspec
