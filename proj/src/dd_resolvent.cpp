#include "fracspec/dd_resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracspec/errors.hpp"
#include "fracspec/weighted_space.hpp"

namespace fracspec {

namespace {

// Exponential integration weights over one step of length dt with z = λ·dt:
//   near = (1/dt) ∫_0^dt e^{−λσ} (1 − σ/dt) dσ,  far = (1/dt) ∫_0^dt e^{−λσ} σ/dt dσ.
struct StepWeights {
    cplx near;
    cplx far;
    cplx decay;  // e^{−z}
};

StepWeights step_weights(cplx z) {
    cplx e0;
    cplx e1;
    const cplx decay = std::exp(-z);
    if (std::abs(z) < 0.1) {
        // e0 = Σ (−z)^k/(k+1)!,  e1 = Σ (−z)^k (k+1)/(k+2)!
        e0 = 0.0;
        e1 = 0.0;
        cplx power = 1.0;
        double fact = 1.0;  // (k+1)!
        for (int k = 0; k < 16; ++k) {
            fact *= (k + 1);
            e0 += power / fact;
            e1 += power * static_cast<double>(k + 1) / (fact * (k + 2));
            power *= -z;
        }
    } else {
        e0 = (1.0 - decay) / z;
        e1 = (1.0 - decay * (1.0 + z)) / (z * z);
    }
    return {e0 - e1, e1, decay};
}

double tail_length(double t_max, int n) {
    return std::log(1.0 / kTailTolerance) + n * std::log1p(t_max);
}

}  // namespace

std::optional<std::size_t> report_limit(const SampledSignal& f, double re_lambda, int n) {
    if (!(re_lambda > 0.0)) {
        throw DomainError("report_limit needs Re lambda > 0");
    }
    const double T = f.t_max();
    const double horizon = T - tail_length(T, n) / re_lambda;
    if (!(horizon > 0.0)) {
        return std::nullopt;
    }
    auto j = static_cast<std::size_t>(std::floor(horizon / f.dt()));
    j = std::min(j, f.size() - 1);
    // strict inequality at the boundary sample
    while (re_lambda * (T - f.time(j)) <= tail_length(T, n)) {
        if (j == 0) return std::nullopt;
        --j;
    }
    return j;
}

SampledSignal resolvent_apply(const SampledSignal& f, cplx lambda, int n) {
    if (lambda.real() == 0.0) {
        throw DomainError("resolvent of d/dt is not defined on the imaginary axis");
    }
    if (n < 0) {
        throw DomainError("weight degree must be non-negative");
    }
    const double dt = f.dt();
    const std::size_t size = f.size();
    if (lambda.real() > 0.0) {
        const auto limit = report_limit(f, lambda.real(), n);
        if (!limit) {
            throw TruncationError("grid too short for the tail criterion at Re lambda = " +
                                  std::to_string(lambda.real()));
        }
        const StepWeights w = step_weights(lambda * dt);
        CMatrix y(f.dim(), static_cast<Eigen::Index>(size));
        y.col(static_cast<Eigen::Index>(size - 1)).setZero();
        for (std::size_t j = size - 1; j-- > 0;) {
            const auto jj = static_cast<Eigen::Index>(j);
            y.col(jj) = dt * (w.near * f.at(j) + w.far * f.at(j + 1)) + w.decay * y.col(jj + 1);
        }
        return SampledSignal(dt, y.leftCols(static_cast<Eigen::Index>(*limit + 1)), n);
    }
    // y_{j+1} = e^{λdt} y_j − ∫_{t_j}^{t_{j+1}} e^{λ(t_{j+1}−s)} f(s) ds
    const StepWeights w = step_weights(-lambda * dt);
    CMatrix y(f.dim(), static_cast<Eigen::Index>(size));
    y.col(0).setZero();
    for (std::size_t j = 0; j + 1 < size; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        y.col(jj + 1) = w.decay * y.col(jj) - dt * (w.near * f.at(j + 1) + w.far * f.at(j));
    }
    return SampledSignal(dt, std::move(y), n);
}

CVector laplace_transform(const SampledSignal& f, cplx lambda) {
    if (!(lambda.real() > 0.0)) {
        throw DomainError("laplace_transform needs Re lambda > 0");
    }
    const double T = f.t_max();
    if (!(lambda.real() * T > tail_length(T, f.degree()))) {
        throw TruncationError("grid too short for the Laplace tail criterion");
    }
    const double dt = f.dt();
    const StepWeights w = step_weights(lambda * dt);
    CVector sum = CVector::Zero(f.dim());
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
        const double t = f.time(j);
        const cplx kernel = std::polar(std::exp(-lambda.real() * t), -lambda.imag() * t);
        sum += kernel * (w.near * f.at(j) + w.far * f.at(j + 1));
    }
    return dt * sum;
}

// ---------------------------------------------------------------------------

RationalFunction::RationalFunction(std::vector<CVector> polynomial, std::vector<CVector> numerator,
                                   std::vector<PoleTerm> poles)
    : polynomial_(std::move(polynomial)), numerator_(std::move(numerator)), poles_(std::move(poles)) {
    dim_ = 0;
    for (const auto* part : {&polynomial_, &numerator_}) {
        for (const CVector& c : *part) {
            if (dim_ == 0) dim_ = c.size();
            if (c.size() != dim_) {
                throw DomainError("rational function coefficients differ in dimension");
            }
        }
    }
    if (dim_ == 0) {
        throw DomainError("rational function needs at least one coefficient");
    }
    for (const PoleTerm& p : poles_) {
        if (p.order < 1) {
            throw DomainError("pole order must be positive");
        }
    }
}

RationalFunction RationalFunction::scalar(std::vector<cplx> polynomial, std::vector<cplx> numerator,
                                          std::vector<PoleTerm> poles) {
    auto lift = [](const std::vector<cplx>& in) {
        std::vector<CVector> out;
        out.reserve(in.size());
        for (cplx c : in) out.push_back(CVector::Constant(1, c));
        return out;
    };
    return RationalFunction(lift(polynomial), lift(numerator), std::move(poles));
}

CVector RationalFunction::operator()(cplx z) const {
    auto horner = [&](const std::vector<CVector>& coeffs) {
        CVector acc = CVector::Zero(dim_);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * z + *it;
        }
        return acc;
    };
    cplx denominator = 1.0;
    for (const PoleTerm& p : poles_) {
        const cplx diff = z - p.location;
        if (diff == cplx{0.0, 0.0}) {
            throw DomainError("rational function evaluated at a pole");
        }
        denominator *= std::pow(diff, p.order);
    }
    return horner(polynomial_) + horner(numerator_) / denominator;
}

HolomorphicHandle HolomorphicHandle::rational(RationalFunction f) {
    return HolomorphicHandle(std::move(f));
}

HolomorphicHandle HolomorphicHandle::laplace_of(SampledSignal f, int n) {
    return HolomorphicHandle(f.with_degree(n));
}

HolomorphicHandle::Kind HolomorphicHandle::kind() const noexcept {
    return std::holds_alternative<RationalFunction>(impl_) ? Kind::Rational : Kind::LaplaceOfSignal;
}

const RationalFunction& HolomorphicHandle::as_rational() const {
    if (const auto* r = std::get_if<RationalFunction>(&impl_)) {
        return *r;
    }
    throw DomainError("handle is not a rational function");
}

CVector HolomorphicHandle::evaluate(cplx lambda) const {
    if (const auto* r = std::get_if<RationalFunction>(&impl_)) {
        return (*r)(lambda);
    }
    return laplace_transform(std::get<SampledSignal>(impl_), lambda);
}

// ---------------------------------------------------------------------------

const CVector& LaurentExpansion::coefficient(int k) const {
    const auto it = coefficients.find(k);
    if (it == coefficients.end()) {
        throw MissingCoefficient("Laurent coefficient a_" + std::to_string(k) + " was not computed");
    }
    return it->second;
}

namespace {

// Normalised coefficients b_k = r^k a_k (the Fourier coefficients on the circle).
std::map<int, CVector> circle_fourier(const RationalFunction& f, cplx center, double r, int k_min,
                                      int k_max, int points, double& scale) {
    std::vector<CVector> samples;
    samples.reserve(static_cast<std::size_t>(points));
    scale = 0.0;
    for (int p = 0; p < points; ++p) {
        const double theta = 2.0 * kPi * p / points;
        samples.push_back(f(center + std::polar(r, theta)));
        scale = std::max(scale, samples.back().norm());
    }
    std::map<int, CVector> b;
    for (int k = k_min; k <= k_max; ++k) {
        CVector acc = CVector::Zero(f.dim());
        for (int p = 0; p < points; ++p) {
            const double theta = 2.0 * kPi * static_cast<double>((static_cast<long long>(k) * p) % points) /
                                 points;
            acc += std::polar(1.0, -theta) * samples[static_cast<std::size_t>(p)];
        }
        b.emplace(k, acc / static_cast<double>(points));
    }
    return b;
}

}  // namespace

LaurentExpansion laurent_coefficients(const HolomorphicHandle& f, double xi, double r, int k_min,
                                      int k_max, int quad_points) {
    if (f.kind() != HolomorphicHandle::Kind::Rational) {
        throw DomainError("Laurent coefficients are computed for rational handles only");
    }
    if (!(r > 0.0)) {
        throw DomainError("contour radius must be positive");
    }
    if (quad_points < 64) {
        throw DomainError("contour quadrature needs at least 64 points");
    }
    if (k_min > k_max || 2 * std::max(std::abs(k_min), std::abs(k_max)) >= quad_points) {
        throw DomainError("coefficient range must be non-empty and below quad_points/2 in size");
    }
    const RationalFunction& rational = f.as_rational();
    const cplx center{0.0, xi};
    for (const PoleTerm& p : rational.poles()) {
        const double distance = std::abs(p.location - center);
        if (distance > 1e-12 * std::max(1.0, r) && distance <= r * (1.0 + 1e-9)) {
            throw SingularityTooClose("another pole lies inside the contour disk");
        }
    }

    double scale = 0.0;
    double scale2 = 0.0;
    const auto coarse = circle_fourier(rational, center, r, k_min, k_max, quad_points, scale);
    const auto fine = circle_fourier(rational, center, r, k_min, k_max, 2 * quad_points, scale2);
    double change = 0.0;
    for (const auto& [k, b] : coarse) {
        change = std::max(change, (b - fine.at(k)).norm());
    }
    if (!(change <= 1e-9 * std::max(1.0, std::max(scale, scale2)))) {
        throw SingularityTooClose("contour quadrature does not settle when quad_points is doubled");
    }

    LaurentExpansion out{xi, r, quad_points, {}};
    for (const auto& [k, b] : coarse) {
        out.coefficients.emplace(k, b * std::pow(r, -k));
    }
    return out;
}

double laurent_bound_residual(const LaurentExpansion& expansion, int N, double M, int k) {
    if (N < 0) {
        throw DomainError("N must be non-negative");
    }
    const double r = expansion.radius;
    CVector lhs = CVector::Zero(expansion.coefficient(k).size());
    double binom = 1.0;
    for (int j = 0; j <= N; ++j) {
        lhs += binom * std::pow(r, 2.0 * (N - j)) * expansion.coefficient(k - 2 * j);
        binom = binom * (N - j) / (j + 1);
    }
    const double rhs = std::pow(2.0, N) * M * std::pow(r, N - k);
    return lhs.norm() - rhs;
}

// ---------------------------------------------------------------------------

std::vector<ScanPoint> singularity_scan(const SampledSignal& f, int n, std::span<const double> xi_grid,
                                        std::span<const double> etas) {
    if (etas.size() < 2) {
        throw DomainError("singularity scan needs at least two eta values");
    }
    for (double eta : etas) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw DomainError("scan eta values must lie in (0, 1]");
        }
    }
    const SampledSignal g = f.with_degree(n);
    std::vector<ScanPoint> out;
    out.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        bool vanishing = false;
        for (double eta : etas) {
            const double value = laplace_transform(g, cplx{eta, xi}).norm();
            if (!(value > 0.0)) {
                vanishing = true;
                break;
            }
            const double x = std::log(eta);
            const double y = std::log(value);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        if (vanishing) {
            out.push_back({xi, 0, 0.0});
            continue;
        }
        const double m = static_cast<double>(etas.size());
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        int order = 0;
        if (slope <= -0.5) {
            order = std::clamp(static_cast<int>(std::lround(-slope)), 1, n + 1);
        }
        out.push_back({xi, order, slope});
    }
    return out;
}

ErgodicDiagnostic extrapolate_ergodic(std::vector<double> etas, std::vector<double> norms) {
    if (etas.empty() || etas.size() != norms.size()) {
        throw DomainError("ergodic extrapolation needs matching, non-empty sequences");
    }
    ErgodicDiagnostic d;
    d.eta_values = std::move(etas);
    d.scaled_norms = std::move(norms);
    const auto& e = d.eta_values;
    const auto& v = d.scaled_norms;
    const std::size_t K = v.size();
    double limit = v.back();
    if (K >= 2) {
        const double last_step = v[K - 1] - v[K - 2];
        d.converged = std::abs(last_step) < 1e-3;
        if (v[K - 1] > v[K - 2] && v[K - 2] > 0.0) {
            const double slope = std::log(v[K - 1] / v[K - 2]) / std::log(e[K - 1] / e[K - 2]);
            d.divergent = slope <= -0.5;
        }
        if (d.divergent) {
            limit = v[K - 1];
        } else if (std::abs(last_step) <= 1e-14 * std::max(1.0, std::abs(v[K - 1]))) {
            limit = v[K - 1];
        } else if (K >= 3) {
            const double prev_step = v[K - 2] - v[K - 3];
            const double rho = last_step / prev_step;
            limit = (rho > 0.0 && rho < 1.0) ? v[K - 1] + last_step * rho / (1.0 - rho) : v[K - 1];
        } else {
            limit = v[K - 1] + last_step * e[K - 1] / (e[K - 2] - e[K - 1]);
        }
    }
    d.extrapolated_limit = std::max(limit, 0.0);
    return d;
}

std::vector<double> default_eta_sequence() {
    std::vector<double> etas;
    for (int k = 1; k <= 10; ++k) {
        etas.push_back(std::ldexp(1.0, -k));
    }
    return etas;
}

std::vector<double> admissible_etas(const SampledSignal& f, int n, std::span<const double> etas,
                                    double min_report_fraction) {
    std::vector<double> out;
    const double needed = min_report_fraction * static_cast<double>(f.size());
    for (double eta : etas) {
        const auto limit = report_limit(f, eta, n);
        if (limit && static_cast<double>(*limit + 1) >= needed) {
            out.push_back(eta);
        }
    }
    return out;
}

std::vector<double> laplace_admissible_etas(const SampledSignal& f, int n, std::span<const double> etas) {
    std::vector<double> out;
    const double T = f.t_max();
    for (double eta : etas) {
        if (eta > 0.0 && eta * T > tail_length(T, n)) {
            out.push_back(eta);
        }
    }
    return out;
}

SignalErgodicMean ergodic_mean_signal(const SampledSignal& f, int n, double zeta,
                                      std::span<const double> etas) {
    if (etas.empty()) {
        throw DomainError("ergodic mean needs at least one eta value");
    }
    std::vector<double> norms;
    std::optional<SampledSignal> last;
    for (double eta : etas) {
        if (!(eta > 0.0)) {
            throw DomainError("ergodic eta values must be positive");
        }
        SampledSignal scaled = cplx{eta, 0.0} * resolvent_apply(f, cplx{eta, zeta}, n);
        norms.push_back(weighted_norm(scaled, n));
        last = std::move(scaled);
    }
    ErgodicDiagnostic diagnostic =
        extrapolate_ergodic(std::vector<double>(etas.begin(), etas.end()), std::move(norms));
    return {std::move(*last), std::move(diagnostic)};
}

}  // namespace fracspec
