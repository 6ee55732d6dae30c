#pragma once

// Deterministic signal and scenario corpora shared by the unit and
// acceptance tests.

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "fracspec/cauchy_solver.hpp"
#include "fracspec/signal.hpp"
#include "fracspec/special_fn.hpp"

namespace corpus {

using fracspec::cplx;
using fracspec::CMatrix;
using fracspec::CVector;
using fracspec::SampledSignal;

inline cplx random_complex(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    return {g(rng), g(rng)};
}

inline CVector random_vector(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
    CVector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = random_complex(rng, scale);
    return v;
}

/// Polynomial (degree ≤ n) plus sinusoid plus decaying exponential, vector
/// valued. Bounded in the (1+t)^n norm.
struct MixedSignal {
    std::vector<CVector> poly;  // coefficients of t^k
    CVector osc;
    double freq;
    CVector bump;
    double rate;

    CVector operator()(double t) const {
        CVector v = osc * std::polar(1.0, freq * t) + bump * std::exp(-rate * t);
        double p = 1.0;
        for (const CVector& c : poly) {
            v += c * p;
            p *= t;
        }
        return v;
    }
};

inline MixedSignal random_mixed(std::mt19937_64& rng, Eigen::Index d, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MixedSignal s;
    for (int k = 0; k <= n; ++k) s.poly.push_back(random_vector(rng, d, 1.0 / (1 + k)));
    s.osc = random_vector(rng, d);
    s.freq = -3.0 + 6.0 * u(rng);
    s.bump = random_vector(rng, d);
    s.rate = 0.2 + 2.0 * u(rng);
    return s;
}

inline SampledSignal sample(const MixedSignal& f, double dt, std::size_t steps, Eigen::Index d, int n) {
    return SampledSignal::from_function(dt, steps, d, [&](double t) { return f(t); }, n);
}

/// Smooth scalar test functions with f(0) available in closed form.
struct SmoothFunction {
    std::string name;
    std::function<double(double)> f;
};

inline std::vector<SmoothFunction> smooth_corpus() {
    return {
        {"one", [](double) { return 1.0; }},
        {"t", [](double t) { return t; }},
        {"t^2-t", [](double t) { return t * t - t; }},
        {"t^3/10", [](double t) { return t * t * t / 10.0; }},
        {"exp(-t)", [](double t) { return std::exp(-t); }},
        {"sin t", [](double t) { return std::sin(t); }},
    };
}

inline SampledSignal sample_real(const std::function<double(double)>& f, double dt, std::size_t steps) {
    return SampledSignal::from_function(dt, steps, 1, [&](double t) {
        CVector v(1);
        v(0) = f(t);
        return v;
    });
}

inline std::string format_complex(cplx c) {
    std::ostringstream out;
    out.precision(17);
    out << c.real() << ':' << c.imag();
    return out.str();
}

inline std::string format_vector(const CVector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_complex(v(i));
    }
    return s;
}

inline std::string format_matrix(const CMatrix& m) {
    std::string s;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r) s += "; ";
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) s += ", ";
            s += format_complex(m(r, c));
        }
    }
    return s;
}

struct SweepCase {
    std::string config;
    double alpha;
    int degree;
    std::vector<double> boundary_xi;  // ξ0 of the planted boundary eigenvalues
};

/// Random diagonalizable scenario for the soundness sweep. Eigenvalues are
/// μ = s^α for stable s (Re s ≤ −0.5), or μ = (iξ0)^α on the boundary.
inline SweepCase random_sweep_case(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double alphas[] = {0.5, 0.8, 1.0};
    const double xis[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    SweepCase c;
    c.alpha = alphas[static_cast<int>(u(rng) * 3) % 3];
    c.degree = u(rng) < 0.5 ? 0 : 1;
    const auto d = static_cast<Eigen::Index>(1 + static_cast<int>(u(rng) * 4) % 4);

    CVector mu(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (u(rng) < 0.25) {
            const double xi = xis[static_cast<int>(u(rng) * 6) % 6];
            c.boundary_xi.push_back(xi);
            mu(i) = fracspec::principal_power(cplx{0.0, xi}, c.alpha);
        } else {
            const double a = 0.5 + 1.5 * u(rng);
            const double b = u(rng) < 0.2 ? 0.0 : -2.0 + 4.0 * u(rng);
            mu(i) = b == 0.0 ? cplx{-std::pow(a, c.alpha), 0.0}
                             : fracspec::principal_power(cplx{-a, b}, c.alpha);
        }
    }
    // eigenbasis near the identity; redrawn until cond(V) ≤ 4 so that ‖A‖ stays
    // comparable to the spectral radius
    CMatrix V;
    for (;;) {
        V = CMatrix::Identity(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index k = 0; k < d; ++k) V(r, k) += random_complex(rng, 0.25);
        const Eigen::JacobiSVD<CMatrix> svd(V);
        const auto& sv = svd.singularValues();
        if (sv(0) <= 4.0 * sv(sv.size() - 1)) break;
    }
    const CMatrix A = V * mu.asDiagonal() * V.inverse();

    std::ostringstream cfg;
    cfg.precision(17);
    cfg << "alpha = " << c.alpha << "\n"
        << "degree = " << c.degree << "\n"
        << "matrix = \"" << format_matrix(A) << "\"\n"
        << "x0 = \"" << format_vector(random_vector(rng, d)) << "\"\n";
    if (u(rng) < 0.5) {
        cfg << "forcing.kind = \"exp_decay\"\n"
            << "forcing.rate = " << 0.5 + 1.5 * u(rng) << "\n"
            << "forcing.vector = \"" << format_vector(random_vector(rng, d)) << "\"\n";
    } else {
        cfg << "forcing.kind = \"zero\"\n";
    }
    // dt = 1/16 resolves the fastest modes (|s| ≤ 2.9, forcing rate ≤ 2); the
    // mild residual there is O(dt²) quadrature error of up to ~6e-3, so the
    // residual gate is 1e-2. T = 480 lets the scan reach η ≈ 1/16.
    cfg << "grid.t_max = 480\n"
        << "grid.steps = 7680\n"
        << "tol.residual = 1e-2\n";
    c.config = cfg.str();
    return c;
}

inline fracspec::Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return fracspec::parse_scenario(in);
}

}  // namespace corpus
