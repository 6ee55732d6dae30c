#include "fracspec/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fracspec/errors.hpp"

namespace fracspec {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct Certified {
    cplx value;
    bool ok;
};

// 1/Γ(x), exact zero at the poles of Γ.
double recip_gamma(double x) {
    if (x <= 0.0 && x == std::nearbyint(x)) {
        return 0.0;
    }
    if (x > 170.0) {
        return std::exp(-std::lgamma(x));
    }
    if (x < -170.0) {
        // Reflection: 1/Γ(x) = Γ(1−x) sin(πx) / π, with sin(πx) reduced first.
        const double n = std::nearbyint(x);
        const double sign = (static_cast<long long>(n) % 2 == 0) ? 1.0 : -1.0;
        return sign * std::sin(kPi * (x - n)) * std::exp(std::lgamma(1.0 - x)) / kPi;
    }
    return 1.0 / std::tgamma(x);
}

// (Γ(1+a) − 1)/a, finite as a → 0.
double gamma1pm1_over_a(double a) {
    if (a < 1e-8) {
        return -kEulerGamma + a * (kEulerGamma * kEulerGamma / 2.0 + kPi * kPi / 12.0);
    }
    return std::expm1(std::lgamma(1.0 + a)) / a;
}

// Γ(a, x) for 0 ≤ a ≤ 1 and 0 < x < a + 1, free of the Γ(a) − x^a/a cancellation.
double upper_gamma_small_a(double a, double x) {
    const double lx = std::log(x);
    const double xa_minus_1_over_a = (a == 0.0) ? lx : std::expm1(a * lx) / a;
    const double xa = std::exp(a * lx);
    double sum = 0.0;
    double xk_over_kfact = 1.0;
    for (int k = 1; k < 200; ++k) {
        xk_over_kfact *= -x / k;
        const double term = xk_over_kfact / (a + k);
        sum += term;
        if (std::abs(term) <= kEps * std::abs(sum)) {
            break;
        }
    }
    return gamma1pm1_over_a(a) - xa_minus_1_over_a - xa * sum;
}

// Lower γ(a, x) by its positive series; used for a > 1, x < a + 1.
double lower_gamma_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (term <= kEps * sum) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x)) * sum;
}

// Γ(a, x) by the modified Lentz continued fraction, x ≥ a + 1.
double upper_gamma_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) <= kEps) {
            return std::exp(-x + a * std::log(x)) * h;
        }
    }
    throw ConvergenceFailure("incomplete gamma continued fraction did not converge");
}

// ---------------------------------------------------------------------------
// Mittag-Leffler regimes

Certified ml_taylor(double alpha, double beta, cplx z, double tol) {
    const double az = std::abs(z);
    const double lz = std::log(az);
    const double argz = std::arg(z);
    cplx sum{0.0, 0.0};
    cplx zk{1.0, 0.0};
    double running_error = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    int small_terms = 0;
    for (int k = 0; k < 20000; ++k) {
        const double x = alpha * k + beta;
        cplx term;
        const double log_mag = k * lz;
        if (x <= 170.0 && log_mag < 600.0) {
            term = zk * recip_gamma(x);
        } else {
            term = std::polar(std::exp(log_mag - std::lgamma(x)), k * argz);
        }
        sum += term;
        const double mag = std::abs(term);
        running_error += (k + 2) * kEps * mag;
        if (k > 0 && mag <= 0.5 * kEps * std::abs(sum) && mag < prev) {
            if (++small_terms >= 2) {
                return {sum, running_error <= tol * std::abs(sum)};
            }
        } else {
            small_terms = 0;
        }
        prev = mag;
        zk *= z;
    }
    return {sum, false};
}

// Poles of s ↦ 1/(s^α − z) on the principal sheet, as angles of s.
// When the integrand has no branch cut (α = 1, integer β) the angle π counts.
std::vector<double> principal_pole_angles(double alpha, double beta, cplx z) {
    const bool cut_free = alpha == 1.0 && beta == std::nearbyint(beta);
    std::vector<double> angles;
    const double argz = std::arg(z);
    const int kmax = static_cast<int>(std::ceil(alpha / 2.0)) + 1;
    for (int k = -kmax; k <= kmax; ++k) {
        const double phi = (argz + 2.0 * kPi * k) / alpha;
        const bool inside = cut_free ? (phi > -kPi && phi <= kPi) : (std::abs(phi) < kPi);
        if (inside) {
            angles.push_back(phi);
        }
    }
    return angles;
}

cplx pole_residue(double alpha, double beta, double radius, double phi) {
    // (1/α) s^(1−β) e^s at s = radius·e^{iφ}
    const cplx s = std::polar(radius, phi);
    const cplx s_pow = std::polar(std::pow(radius, 1.0 - beta), (1.0 - beta) * phi);
    return s_pow * std::exp(s) / alpha;
}

Certified ml_asymptotic(double alpha, double beta, cplx z, double tol) {
    if (alpha > 1.0) {
        return {cplx{}, false};
    }
    const double az = std::abs(z);
    const double argz = std::arg(z);
    const double radius = std::pow(az, 1.0 / alpha);
    const bool cut_free = alpha == 1.0 && beta == std::nearbyint(beta);

    cplx poles{0.0, 0.0};
    for (double phi : principal_pole_angles(alpha, beta, z)) {
        poles += pole_residue(alpha, beta, radius, phi);
    }

    // Near the cut the algebraic expansion is not uniform; the error there is
    // of the size of a pole term sitting on the negative axis.
    double nonuniform = 0.0;
    if (!cut_free) {
        for (int k = -2; k <= 2; ++k) {
            const double phi = (argz + 2.0 * kPi * k) / alpha;
            if (std::abs(kPi - std::abs(phi)) < 0.5) {
                nonuniform = std::max(nonuniform, std::pow(radius, 1.0 - beta) *
                                                      std::exp(radius * std::cos(phi)) / alpha);
            }
        }
    }

    cplx series{0.0, 0.0};
    double last = std::numeric_limits<double>::infinity();
    double error = 0.0;
    int vanished = 0;  // consecutive terms at poles of Γ
    for (int k = 1; k < 400; ++k) {
        const double x = beta - alpha * k;
        // 1/Γ vanishes at the poles; rounding in αk leaves a tiny remnant there
        // that would otherwise pass for convergence.
        if (x <= 0.0 && std::abs(x - std::nearbyint(x)) <= 64.0 * kEps * std::max(1.0, alpha * k)) {
            // α = 1 with integer β: the expansion is finite and exact
            if (++vanished >= 100) {
                error = 0.0;
                break;
            }
            continue;
        }
        vanished = 0;
        const double c = recip_gamma(x);
        const cplx term = -c * std::polar(std::pow(az, -static_cast<double>(k)), -k * argz);
        const double mag = std::abs(term);
        if (mag > last) {
            error = mag;
            break;
        }
        series += term;
        last = mag;
        error = mag;
        if (mag <= kEps * std::abs(poles + series)) {
            break;
        }
    }
    const cplx total = poles + series;
    const double scale = std::abs(total);
    return {total, error <= tol * scale && nonuniform <= tol * scale};
}

// Hankel contour deformed onto the rays arg s = ±θ with θ in (π/2, π):
//   E = (1/2πi) ∫_rays e^s s^(α−β)/(s^α − z) ds + Σ_{|arg s*| < θ} Res.
// Each ray is integrated with the exp-sinh substitution r = exp(π/2 sinh t)
// and the trapezoid rule, halving the step until successive sums agree.
// For β ≥ 1 + α the integrand is not integrable at s = 0, so the rays start
// on a circle of radius ρ inside the poles and the arc |s| = ρ is added.
// (The recurrence in β cancels badly near zeros of E_{α,β−α}(z) − 1/Γ(β−α).)
Certified ml_contour(double alpha, double beta, cplx z, double tol) {
    const std::vector<double> poles = principal_pole_angles(alpha, beta, z);

    double theta = 0.75 * kPi;
    double best = -1.0;
    for (int i = 0; i <= 80; ++i) {
        const double cand = kPi * (0.55 + 0.4 * i / 80.0);
        double score = std::min(cand - kPi / 2.0, kPi - cand);
        for (double phi : poles) {
            score = std::min(score, std::abs(std::abs(phi) - cand));
        }
        if (score > best) {
            best = score;
            theta = cand;
        }
    }

    const double radius = std::pow(std::abs(z), 1.0 / alpha);
    const double rho = beta >= 1.0 + alpha ? std::min(0.5 * radius, 1.0) : 0.0;
    cplx residues{0.0, 0.0};
    for (double phi : poles) {
        if (std::abs(phi) < theta) {
            residues += pole_residue(alpha, beta, radius, phi);
        }
    }

    cplx arc{0.0, 0.0};
    if (rho > 0.0) {
        // (1/2π) ∫_{−θ}^{θ} e^s s^(1+α−β)/(s^α − z) dφ on s = ρe^{iφ}, Romberg.
        auto g = [&](double phi) {
            const cplx s = std::polar(rho, phi);
            return std::exp(s) * std::polar(std::pow(rho, 1.0 + alpha - beta), (1.0 + alpha - beta) * phi) /
                   (std::polar(std::pow(rho, alpha), alpha * phi) - z) / (2.0 * kPi);
        };
        constexpr int kLevels = 16;
        std::vector<cplx> prev_row;
        std::vector<cplx> row;
        double h = 2.0 * theta;
        cplx trap = 0.5 * h * (g(-theta) + g(theta));
        bool done = false;
        prev_row.push_back(trap);
        for (int level = 1; level < kLevels && !done; ++level) {
            cplx mid{0.0, 0.0};
            const int count = 1 << (level - 1);
            for (int i = 0; i < count; ++i) {
                mid += g(-theta + (i + 0.5) * h);
            }
            trap = 0.5 * trap + 0.5 * h * mid;
            h *= 0.5;
            row.assign(1, trap);
            double factor = 1.0;
            for (int m = 1; m <= level; ++m) {
                factor *= 4.0;
                row.push_back(row[m - 1] + (row[m - 1] - prev_row[m - 1]) / (factor - 1.0));
            }
            if (level >= 4 && std::abs(row.back() - prev_row.back()) <= 0.1 * tol * std::abs(row.back())) {
                done = true;
            }
            prev_row.swap(row);
        }
        if (!done) {
            return {prev_row.back() + residues, false};
        }
        arc = prev_row.back();
        residues += arc;
    }

    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const cplx two_pi_i{0.0, 2.0 * kPi};
    auto integrand = [&](double t) -> cplx {
        const double e = std::exp(0.5 * kPi * std::sinh(t));
        const double r = rho + e;
        if (r == 0.0 || !std::isfinite(r)) {
            return {0.0, 0.0};
        }
        const double decay = r * ct;
        if (decay < -745.0) {
            return {0.0, 0.0};
        }
        const double dr = e * 0.5 * kPi * std::cosh(t);
        const double mag = std::exp(decay) * std::pow(r, alpha - beta) * dr;
        const double ra = std::pow(r, alpha);
        cplx up = std::polar(mag, r * st + (alpha - beta) * theta + theta) /
                  (std::polar(ra, alpha * theta) - z);
        cplx down = std::polar(mag, -r * st - (alpha - beta) * theta - theta) /
                    (std::polar(ra, -alpha * theta) - z);
        return (up - down) / two_pi_i;
    };

    // Locate the numerically relevant t-range.
    constexpr double scan = 0.25;
    double gmax = 0.0;
    for (int i = -40; i <= 40; ++i) {
        gmax = std::max(gmax, std::abs(integrand(i * scan)));
    }
    if (gmax == 0.0 || !std::isfinite(gmax)) {
        return {residues, std::isfinite(std::abs(residues))};
    }
    const double cutoff = 1e-18 * gmax;
    int lo = 0;
    while (lo > -40 && std::abs(integrand((lo - 1) * scan)) > cutoff) --lo;
    int hi = 0;
    while (hi < 40 && std::abs(integrand((hi + 1) * scan)) > cutoff) ++hi;
    const double ta = (lo - 2) * scan;
    const double tb = (hi + 2) * scan;

    int intervals = static_cast<int>(std::lround((tb - ta) / scan));
    double h = scan;
    cplx sum{0.0, 0.0};
    double abs_sum = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        const cplx g = integrand(ta + i * h);
        sum += g;
        abs_sum += std::abs(g);
    }
    cplx estimate = h * sum;
    for (int level = 1; level <= 12; ++level) {
        cplx added{0.0, 0.0};
        for (int i = 0; i < intervals; ++i) {
            const cplx g = integrand(ta + (i + 0.5) * h);
            added += g;
            abs_sum += std::abs(g);
        }
        sum += added;
        intervals *= 2;
        h *= 0.5;
        const cplx refined = h * sum;
        const double change = std::abs(refined - estimate);
        estimate = refined;
        const cplx total = estimate + residues;
        if (level >= 2 && (change <= tol * std::abs(total) || change <= 1e-15 * h * abs_sum)) {
            return {total, true};
        }
    }
    return {estimate + residues, false};
}

}  // namespace

cplx principal_power(cplx lambda, double alpha) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || !std::isfinite(alpha)) {
        throw DomainError("principal_power: non-finite input");
    }
    if (lambda.imag() == 0.0 && lambda.real() <= 0.0) {
        throw BranchCutViolation("power base " + std::to_string(lambda.real()) +
                                 " lies on the branch cut (-inf, 0]");
    }
    return std::polar(std::pow(std::abs(lambda), alpha), alpha * std::arg(lambda));
}

double kernel_g(double alpha, double t) {
    if (!(alpha > 0.0) || !(t > 0.0)) {
        throw DomainError("kernel_g requires alpha > 0 and t > 0");
    }
    return std::pow(t, alpha - 1.0) / std::tgamma(alpha);
}

double upper_incomplete_gamma(double a, double x) {
    if (!(a >= 0.0) || !(x >= 0.0)) {
        throw DomainError("upper_incomplete_gamma requires a >= 0 and x >= 0");
    }
    if (a == 0.0 && x == 0.0) {
        throw DomainError("upper_incomplete_gamma(0, 0) diverges");
    }
    if (x == 0.0) {
        return std::tgamma(a);
    }
    if (x >= a + 1.0) {
        return upper_gamma_continued_fraction(a, x);
    }
    if (a <= 1.0) {
        return upper_gamma_small_a(a, x);
    }
    return std::tgamma(a) - lower_gamma_series(a, x);
}

cplx mittag_leffler(double alpha, double beta, cplx z, const MittagLefflerOptions& options) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError("mittag_leffler requires alpha > 0 and beta > 0");
    }
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("mittag_leffler: non-finite argument");
    }
    const double az = std::abs(z);
    if (az == 0.0) {
        return recip_gamma(beta);
    }
    if (az <= options.taylor_radius) {
        const Certified t = ml_taylor(alpha, beta, z, options.tolerance);
        if (t.ok) return t.value;
    }
    if (az >= options.asymptotic_radius || std::pow(az, 1.0 / alpha) >= options.asymptotic_pole_radius) {
        const Certified a = ml_asymptotic(alpha, beta, z, options.tolerance);
        if (a.ok) return a.value;
    }
    const Certified c = ml_contour(alpha, beta, z, options.tolerance);
    if (!c.ok) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "mittag_leffler: contour quadrature could not certify tolerance at alpha = " << alpha
            << ", beta = " << beta << ", z = " << z;
        throw ConvergenceFailure(msg.str());
    }
    return c.value;
}

cplx weight_laplace(int n, cplx s) {
    if (n < 0) {
        throw DomainError("weight_laplace requires n >= 0");
    }
    if (!(s.real() > 0.0)) {
        throw DomainError("weight_laplace requires Re s > 0");
    }
    // Σ_k (n!/k!) s^(k−n−1), accumulated from k = n downwards.
    cplx sum{0.0, 0.0};
    cplx power = 1.0 / s;  // s^(k−n−1) at k = n
    double ratio = 1.0;    // n!/k! at k = n
    for (int k = n; k >= 0; --k) {
        sum += ratio * power;
        power /= s;
        ratio *= k;
    }
    return sum;
}

double weight_laplace_bound(int n, double x) {
    if (n < 0 || !(x > 0.0)) {
        throw DomainError("weight_laplace_bound requires n >= 0 and x > 0");
    }
    return std::exp(x) * upper_incomplete_gamma(n + 1.0, x) / std::pow(x, n + 1.0);
}

}  // namespace fracspec
