#include "fracspec/frac_calculus.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec {

namespace {

// (m+1)^p − 2 m^p + (m−1)^p for m ≥ 1, without the O(m^p) cancellation.
double second_difference(double p, double m) {
    const double x = 1.0 / m;
    return std::pow(m, p) * (std::expm1(p * std::log1p(x)) + std::expm1(p * std::log1p(-x)));
}

// (j−1)^(α+1) − (j−1−α) j^α for j ≥ 1.
double first_weight(double alpha, double j) {
    const double p = alpha + 1.0;
    return std::pow(j, p) * (std::expm1(p * std::log1p(-1.0 / j)) + p / j);
}

// Exponent γ of a start h(t) ≈ h(0) + c·t^γ + b·t, read off the first
// samples. D(k) = h(2k) − 2h(k) + h(0) drops the linear part and scales like
// k^γ; two doubling ratios must agree, otherwise the start is taken as smooth.
std::optional<double> start_exponent(const CMatrix& samples, Eigen::Index row) {
    if (samples.cols() < 9) return std::nullopt;
    const auto h = [&](Eigen::Index k) { return samples(row, k); };
    const double d1 = std::abs(h(2) - 2.0 * h(1) + h(0));
    const double d2 = std::abs(h(4) - 2.0 * h(2) + h(0));
    const double d4 = std::abs(h(8) - 2.0 * h(4) + h(0));
    const double scale = samples.row(row).cwiseAbs().maxCoeff();
    if (!(d1 > 1e-10 * scale)) return std::nullopt;
    const double g1 = std::log2(d2 / d1);
    const double g2 = std::log2(d4 / d2);
    if (std::abs(g1 - g2) > 0.05 || g1 < 0.05 || g1 > 0.9) return std::nullopt;
    return g1;
}

}  // namespace

ProductWeights::ProductWeights(double alpha, double dt, std::size_t steps)
    : alpha_(alpha), dt_(dt), first_(steps + 1, 0.0), lag_(steps + 1, 0.0) {
    if (!(alpha > 0.0)) {
        throw DomainError("product weights require alpha > 0");
    }
    if (!(dt > 0.0)) {
        throw GridError("product weights require dt > 0");
    }
    const double scale = std::pow(dt, alpha) / std::tgamma(alpha + 2.0);
    lag_[0] = scale;
    for (std::size_t m = 1; m <= steps; ++m) {
        lag_[m] = scale * second_difference(alpha + 1.0, static_cast<double>(m));
        first_[m] = scale * first_weight(alpha, static_cast<double>(m));
    }
}

CMatrix ProductWeights::apply(const CMatrix& samples) const {
    const auto n = static_cast<std::size_t>(samples.cols());
    if (n > lag_.size()) {
        throw GridError("product weights built for a shorter grid");
    }
    CMatrix out = CMatrix::Zero(samples.rows(), samples.cols());
    std::vector<cplx> h(n);
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            h[k] = samples(r, static_cast<Eigen::Index>(k));
        }
        for (std::size_t j = 1; j < n; ++j) {
            cplx acc = first_[j] * h[0];
            for (std::size_t k = 1; k <= j; ++k) {
                acc += lag_[j - k] * h[k];
            }
            out(r, static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return out;
}

std::vector<double> rectangle_weights(double alpha, double dt, std::size_t steps) {
    std::vector<double> w(steps + 1);
    const double scale = std::pow(dt, alpha) / std::tgamma(alpha + 1.0);
    w[0] = scale;
    for (std::size_t m = 1; m <= steps; ++m) {
        const double md = static_cast<double>(m);
        w[m] = scale * std::pow(md, alpha) * std::expm1(alpha * std::log1p(1.0 / md));
    }
    return w;
}

SampledSignal frac_integral(const SampledSignal& f, FractionalOrder alpha) {
    const double a = alpha.value();
    const double dt = f.dt();
    const ProductWeights weights(a, dt, f.size() - 1);
    CMatrix out = weights.apply(f.values());

    // A start like t^γ, γ < 1, costs the rule O(dt^(α+γ)) over the whole grid
    // (J^α of a Caputo derivative starts like t^(1−α)). Lubich starting
    // weights on h_0..h_2 make the rule exact for 1, t^γ and t.
    const Eigen::Index n = out.cols();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        const auto gamma = start_exponent(f.values(), r);
        if (!gamma) continue;
        CMatrix probe(1, n);
        for (Eigen::Index j = 0; j < n; ++j) probe(0, j) = std::pow(static_cast<double>(j) * dt, *gamma);
        const CMatrix rule = weights.apply(probe);
        Eigen::Matrix3d basis;
        for (int i = 0; i < 3; ++i) {
            basis(0, i) = 1.0;
            basis(1, i) = std::pow(i * dt, *gamma);
            basis(2, i) = i * dt;
        }
        const Eigen::Vector3d q = basis.inverse().col(1);
        const cplx start = q(0) * f.values()(r, 0) + q(1) * f.values()(r, 1) + q(2) * f.values()(r, 2);
        const double c = std::tgamma(*gamma + 1.0) / std::tgamma(*gamma + a + 1.0);
        for (Eigen::Index j = 1; j < n; ++j) {
            const double exact = c * std::pow(static_cast<double>(j) * dt, *gamma + a);
            out(r, j) += (exact - rule(0, j).real()) * start;
        }
    }
    return SampledSignal(dt, std::move(out), f.degree());
}

SampledSignal grid_derivative(const SampledSignal& f) {
    const std::size_t n = f.size();
    if (n < 3) {
        throw TooFewPoints("finite differences need at least 3 samples");
    }
    const double inv = 1.0 / (2.0 * f.dt());
    CMatrix d(f.dim(), static_cast<Eigen::Index>(n));
    d.col(0) = (-3.0 * f.at(0) + 4.0 * f.at(1) - f.at(2)) * inv;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        d.col(static_cast<Eigen::Index>(j)) = (f.at(j + 1) - f.at(j - 1)) * inv;
    }
    d.col(static_cast<Eigen::Index>(n - 1)) =
        (3.0 * f.at(n - 1) - 4.0 * f.at(n - 2) + f.at(n - 3)) * inv;
    return SampledSignal(f.dt(), std::move(d), f.degree());
}

SampledSignal caputo_derivative(const SampledSignal& f, FractionalOrder alpha) {
    SampledSignal derivative = grid_derivative(f);
    if (alpha.is_integer()) {
        return derivative;
    }
    return frac_integral(derivative, FractionalOrder(1.0 - alpha.value()));
}

}  // namespace fracspec
