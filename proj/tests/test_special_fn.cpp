#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fracspec/errors.hpp"
#include "fracspec/special_fn.hpp"

using namespace fracspec;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("principal_power examples") {
    CHECK(std::abs(principal_power({4.0, 0.0}, 0.5) - cplx(2.0, 0.0)) < 1e-15);
    const cplx r = principal_power({0.0, 1.0}, 0.5);
    CHECK(r.real() == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(r.imag() == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK_THROWS_AS(principal_power({-2.0, 0.0}, 0.5), BranchCutViolation);
    CHECK_THROWS_AS(principal_power({0.0, 0.0}, 0.5), BranchCutViolation);
    // just above and below the cut the sides differ by the full 2πα
    const cplx above = principal_power({-1.0, 1e-300}, 0.5);
    const cplx below = principal_power({-1.0, -1e-300}, 0.5);
    CHECK(above.imag() == doctest::Approx(1.0));
    CHECK(below.imag() == doctest::Approx(-1.0));
}

TEST_CASE("principal_power splits and conjugates") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const cplx lambda{g(rng), g(rng)};
        for (double a : {0.1, 0.3, 0.5, 0.77, 1.0}) {
            const cplx prod = principal_power(lambda, a) * principal_power(lambda, 1.0 - a);
            CHECK(rel(prod, lambda) <= 1e-13);
            CHECK(std::abs(std::conj(principal_power(lambda, a)) - principal_power(std::conj(lambda), a)) <=
                  1e-14 * std::abs(lambda));
        }
    }
}

TEST_CASE("kernel_g values and integral") {
    CHECK(kernel_g(1.0, 7.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kernel_g(2.0, 3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(kernel_g(0.5, 1.0) == doctest::Approx(0.5641896).epsilon(1e-7));
    CHECK_THROWS_AS(kernel_g(0.5, 0.0), DomainError);
    CHECK_THROWS_AS(kernel_g(0.0, 1.0), DomainError);

    boost::math::quadrature::tanh_sinh<double> quad;
    for (double a : {0.3, 0.5, 0.9}) {
        for (double T : {1.0, 5.0}) {
            const double integral = quad.integrate([a](double t) { return kernel_g(a, t); }, 0.0, T);
            CHECK(std::abs(integral - std::pow(T, a) / std::tgamma(a + 1.0)) <= 1e-8);
        }
    }
}

TEST_CASE("upper incomplete gamma") {
    CHECK(upper_incomplete_gamma(1.0, 1.0) == doctest::Approx(0.3678794).epsilon(1e-7));
    CHECK(upper_incomplete_gamma(3.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(upper_incomplete_gamma(2.0, 1.0) == doctest::Approx(0.7357589).epsilon(1e-7));
    // the defining integral, shifted to (0, inf)
    boost::math::quadrature::exp_sinh<double> tail;
    const double q = tail.integrate([](double s) { return (s + 1.0) * std::exp(-(s + 1.0)); });
    CHECK(std::abs(upper_incomplete_gamma(2.0, 1.0) - q) <= 1e-12);

    double factorial = 1.0;
    for (int n = 0; n <= 10; ++n) {
        if (n > 0) factorial *= n;
        CHECK(std::abs(upper_incomplete_gamma(n + 1.0, 0.0) - factorial) <= 1e-12 * factorial);
    }
    for (int a = 1; a <= 10; ++a) {
        CHECK(std::abs(upper_incomplete_gamma(a, 0.0) - std::tgamma(a)) <= 1e-12 * std::tgamma(a));
    }

    CHECK_THROWS_AS(upper_incomplete_gamma(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 0.0), DomainError);
}

TEST_CASE("upper incomplete gamma against Boost on a in [0, 30], x in [0, 50]") {
    double worst = 0.0;
    for (double a : {0.0, 0.001, 0.25, 0.5, 1.0, 1.5, 2.0, 3.5, 7.0, 10.0, 15.5, 20.0, 30.0}) {
        for (double x : {0.0, 1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 29.0, 31.0, 40.0, 50.0}) {
            if (a == 0.0 && x == 0.0) continue;
            const double ours = upper_incomplete_gamma(a, x);
            const double oracle = a == 0.0 ? boost::math::expint(1, x)
                                  : x == 0.0 ? boost::math::tgamma(a)
                                             : boost::math::tgamma(a, x);
            worst = std::max(worst, std::abs(ours - oracle) / oracle);
        }
    }
    MESSAGE("worst relative error " << worst);
    CHECK(worst <= 1e-12);
}

TEST_CASE("mittag_leffler closed forms") {
    CHECK(rel(mittag_leffler(1.0, 1.0, {1.0, 0.0}), std::exp(1.0)) <= 1e-14);
    CHECK(mittag_leffler(0.5, 1.0, {0.0, 0.0}) == cplx(1.0, 0.0));
    CHECK(mittag_leffler(0.5, 1.5, {0.0, 0.0}).real() == doctest::Approx(1.0 / std::tgamma(1.5)));
    CHECK(std::abs(mittag_leffler(2.0, 1.0, {-1.0, 0.0}).real() - std::cos(1.0)) <= 1e-10);
    CHECK(std::abs(mittag_leffler(0.5, 1.0, {-1.0, 0.0}).real() - 0.4275836) <= 5e-8);

    // E_{1/2}(x) = e^{x²} erfc(−x) on the negative axis
    for (double x : {-0.5, -1.0, -3.0, -5.0, -7.0, -10.0, -15.0, -20.0, -30.0, -50.0}) {
        // e^{x²} overflows a double past |x| ≈ 26; long double still holds both factors
        const auto expected = static_cast<double>(std::exp(static_cast<long double>(x) * x) *
                                                  std::erfc(-static_cast<long double>(x)));
        CHECK(std::abs(mittag_leffler(0.5, 1.0, {x, 0.0}).real() - expected) <= 1e-10 * expected);
    }
}

TEST_CASE("mittag_leffler(1, 1, z) = exp(z) on a 100-point grid in |z| <= 10") {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        for (int k = 0; k < 10; ++k) {
            const cplx z = std::polar(1.0 + i, -kPi + (k + 0.5) * 2.0 * kPi / 10.0);
            worst = std::max(worst, rel(mittag_leffler(1.0, 1.0, z), std::exp(z)));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("mittag_leffler(1, beta) for beta = 2, 3 through every regime") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 3000; ++i) {
        const cplx z = std::polar(0.5 + 39.5 * u(rng), kPi * (2.0 * u(rng) - 1.0));
        const cplx e2 = (std::exp(z) - 1.0) / z;
        const cplx e3 = (std::exp(z) - 1.0 - z) / (z * z);
        worst = std::max({worst, rel(mittag_leffler(1.0, 2.0, z), e2), rel(mittag_leffler(1.0, 3.0, z), e3)});
    }
    CHECK(worst <= 1e-10);
    // close to a zero of E_{1,1}(z) − 1, where lowering β by recurrence cancels
    const cplx z{0.0, -6.125};
    CHECK(rel(mittag_leffler(1.0, 2.0, z), (std::exp(z) - 1.0) / z) <= 1e-12);
}

TEST_CASE("mittag_leffler against the frozen high-precision table") {
    std::ifstream in(std::string(FRACSPEC_TEST_DATA) + "/ml_reference.txt");
    REQUIRE(in.good());
    std::string line;
    int count = 0;
    double worst = 0.0;
    std::string worst_line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double a, b, x, y, re, im;
        row >> a >> b >> x >> y >> re >> im;
        const double err = rel(mittag_leffler(a, b, {x, y}), {re, im});
        if (err > worst) {
            worst = err;
            worst_line = line;
        }
        ++count;
    }
    MESSAGE(count << " points, worst relative error " << worst << " at " << worst_line);
    CHECK(count >= 800);
    CHECK(worst <= 1e-10);
}

TEST_CASE("mittag_leffler argument checks") {
    CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(mittag_leffler(0.5, -1.0, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, {NAN, 0.0}), DomainError);
}

TEST_CASE("weight_laplace examples and domain") {
    CHECK(std::abs(weight_laplace(0, {2.0, 0.0}) - cplx(0.5, 0.0)) <= 1e-15);
    CHECK(std::abs(weight_laplace(1, {1.0, 0.0}) - cplx(2.0, 0.0)) <= 1e-15);
    CHECK(std::abs(weight_laplace(2, {1.0, 0.0}) - cplx(5.0, 0.0)) <= 1e-14);
    CHECK_THROWS_AS(weight_laplace(1, {0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(weight_laplace(-1, {1.0, 0.0}), DomainError);
    for (int n = 0; n <= 4; ++n) {
        for (double x : {0.1, 0.5, 1.0, 2.0, 7.0}) {
            CHECK(weight_laplace_bound(n, x) == doctest::Approx(weight_laplace(n, {x, 0.0}).real()).epsilon(1e-12));
        }
    }
}

TEST_CASE("weight_laplace matches trapezoid quadrature on [0, 200]") {
    const double h = 1.0 / 2048.0;
    const int steps = 200 * 2048;
    for (int n = 0; n <= 3; ++n) {
        for (cplx s : {cplx(0.5, 0.0), cplx(0.5, 2.0), cplx(1.0, -1.0), cplx(2.0, 0.5), cplx(3.0, 4.0)}) {
            cplx sum = 0.5 * 1.0;
            for (int j = 1; j < steps; ++j) {
                const double t = j * h;
                sum += std::pow(1.0 + t, n) * std::exp(-s * t);
            }
            sum += 0.5 * std::pow(201.0, n) * std::exp(-s * 200.0);
            CHECK(std::abs(weight_laplace(n, s) - h * sum) <= 1e-6);
        }
    }
}
