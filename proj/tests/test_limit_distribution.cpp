// The analytic route. The independent oracle is the elementary closed form
//
//   Prob(σ ≤ c) = (2c/π) sin(π/(2c)),   f(c) = (2/π) sin(π/(2c)) - cos(π/(2c))/c,
//
// which the oscillatory-quadrature pipeline reproduces to machine precision.
// It is used here only as a test oracle; the library never evaluates it.
// Its expansions give K1 = 4π² and K2 = π²/12.

#include "zerofree/limit_distribution.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace zerofree;

namespace {

constexpr double kPi = std::numbers::pi;

double cdf_closed(double c) { return 2 * c / kPi * std::sin(kPi / (2 * c)); }
double density_closed(double c) { return 2 / kPi * std::sin(kPi / (2 * c)) - std::cos(kPi / (2 * c)) / c; }

}  // namespace

TEST_CASE("cdf matches the closed-form oracle") {
    for (double c : {0.505, 0.51, 0.6, 0.75, 1.0, 1.3, 2.0, 2.5, 4.0, 10.0}) {
        const auto r = cdf_with_error(c);
        INFO("c = " << c);
        CHECK(std::abs(r.value - cdf_closed(c)) < 1e-12);
        CHECK(r.err_estimate < 1e-9);
    }
    CHECK(cdf(0.51) == doctest::Approx(0.019987).epsilon(1e-4));
    CHECK(std::abs(cdf(10.0) - 0.995888) < 5e-4);
}

TEST_CASE("density matches the closed-form oracle and the spot values") {
    for (double c : {0.505, 0.55, 0.7, 1.0, 1.5, 2.5, 6.0}) {
        INFO("c = " << c);
        CHECK(std::abs(density(c) - density_closed(c)) < 1e-11);
    }
    CHECK(std::abs(density(2.5) - 0.05) < 0.005);
    CHECK(std::abs(density(0.505) - 1.999013) < 1e-4);
    CHECK_THROWS_AS(density(0.5), DomainError);
}

TEST_CASE("property: cdf is monotone in [0,1]; density nonnegative") {
    double prev = 0;
    for (double c = 0.505; c < 8; c += 0.0625) {
        const double v = cdf(c);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        CHECK(density(c) >= -1e-8);
        prev = v;
    }
    CHECK(cdf(0.6) < 0.5);
    CHECK(cdf(2.0) > 0.5);
}

TEST_CASE("property: five-point derivative of the cdf equals the density") {
    const double h = 1e-3;
    for (double c : {0.7, 1.0, 1.5, 2.0}) {
        const double d = (-cdf(c + 2 * h) + 8 * cdf(c + h) - 8 * cdf(c - h) + cdf(c - 2 * h)) / (12 * h);
        CHECK(std::abs(d - density(c)) < 1e-4);
    }
}

TEST_CASE("density integrates to one with the asymptotic tail") {
    // Composite Gauss–Legendre on graded panels over (1/2, 20).
    double total = 0;
    const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0, 0.5384693101056831, 0.9061798459386640};
    const double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
    for (double lo = 0.5; lo < 20; lo += (lo < 3 ? 0.05 : 0.5)) {
        const double hi = std::min(20.0, lo + (lo < 3 ? 0.05 : 0.5));
        for (int i = 0; i < 5; ++i) total += weights[i] * (hi - lo) / 2 * density((lo + hi) / 2 + (hi - lo) / 2 * nodes[i]);
    }
    total += stored_k2() / (2 * 20.0 * 20.0);
    CHECK(std::abs(total - 1) < 1e-3);
}

TEST_CASE("asymptotic regimes") {
    CHECK(density_asymptotic(0.5, AsymptoticRegime::near_half) == doctest::Approx(2.0));
    CHECK(density_asymptotic(10, AsymptoticRegime::large_c) == doctest::Approx(0.000822467).epsilon(1e-6));
    CHECK(density_asymptotic(0.55, AsymptoticRegime::near_half) == doctest::Approx(1.901304).epsilon(1e-6));
    // near c = 1/2 the expansion 2 - K1 t² is off by O(t³)
    const double e1 = std::abs(density_asymptotic(0.51, AsymptoticRegime::near_half) - density_closed(0.51));
    const double e2 = std::abs(density_asymptotic(0.52, AsymptoticRegime::near_half) - density_closed(0.52));
    CHECK(e1 < 3e-4);
    CHECK(e2 / e1 == doctest::Approx(8).epsilon(0.15));
    CHECK(std::abs(density_asymptotic(20, AsymptoticRegime::large_c) - density_closed(20)) < 1e-6);
}

TEST_CASE("constants K1 and K2") {
    const auto k2 = constant_k2();
    const auto k1 = constant_k1();
    CHECK(std::abs(k2.value - 0.822467) < 5e-6);
    CHECK(std::abs(k1.value - 39.47841) < 5e-4);
    // Oracles from the expansions of the closed form.
    CHECK(std::abs(k2.value - kPi * kPi / 12) < 1e-10);
    CHECK(std::abs(k1.value - 4 * kPi * kPi) < 1e-8);
    CHECK(std::abs(k2_companion().value) < 1e-6);
    CHECK(std::abs(k1_companion().value) < 1e-5);
    CHECK(k1_integrand(1e-4) == doctest::Approx(17.0 / 6).epsilon(1e-6));
    CHECK(std::abs(k1_integrand(1.001e-3) - 17.0 / 6) < 1e-6);
    CHECK(std::abs(k1_integrand(0.01) - 17.0 / 6) < 1e-4);
}

TEST_CASE("K2 half-period contributions alternate in sign") {
    const auto parts = k2_half_period_contributions(30);
    REQUIRE(parts.size() == 30);
    int alternations = 0;
    for (std::size_t i = 10; i + 1 < parts.size(); ++i) alternations += (parts[i] > 0) != (parts[i + 1] > 0);
    CHECK(alternations == int(parts.size()) - 11);
}

TEST_CASE("the real-part analogue grows as the lower limit shrinks") {
    double prev = 0;
    for (double y0 = 1e-1; y0 >= 1e-6; y0 /= 10) {
        const double re = std::abs(untaken_imaginary_partial_integral(1.0, y0).real());
        CHECK(re > prev);
        prev = re;
    }
    CHECK(prev > 10);
}

TEST_CASE("conditional characteristic function and density") {
    CHECK(std::abs(conditional_char_function(2.0, 1.0, 0.0) - cplx(1, 0)) < 1e-15);
    for (double t = -40; t <= 40; t += 2.5) {
        const cplx p = conditional_char_function(2.0, 1.0, t);
        CHECK(std::abs(p) <= 1 + 1e-12);
        CHECK(std::abs(conditional_char_function(2.0, 1.0, -t) - std::conj(p)) < 1e-14);
    }
    // Direct-quadrature form: log φ = ∫_δ^∞ (e^{itx^{-a}} - 1) dx, substituting x = δ/u
    // (dx = δ u^{-2} du) on (0, 1] with the u → 0 behaviour (e^{itu^a δ^{-a}} - 1)/u² → 0 for a = 2.
    const double a = 2, delta = 1, t = 5;
    cplx integral(0, 0);
    const int panels = 4000;
    const double gl[3] = {-0.7745966692414834, 0, 0.7745966692414834};
    const double gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
    for (int p = 0; p < panels; ++p) {
        for (int i = 0; i < 3; ++i) {
            const double u = (p + 0.5 + 0.5 * gl[i]) / panels;
            const cplx e = std::exp(cplx(0, t * std::pow(u / delta, a))) - 1.0;
            integral += gw[i] * 0.5 / panels * e * delta / (u * u);
        }
    }
    CHECK(std::abs(std::exp(integral) - conditional_char_function(a, delta, t)) < 1e-8);

    // Normalization and support of the density.
    std::vector<double> xs;
    for (double x = -1; x <= 12; x += 0.01) xs.push_back(x);
    const auto f = conditional_density_grid(2.0, 1.0, xs);
    double mass = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) mass += 0.5 * (f[i] + f[i + 1]) * 0.01;
    CHECK(std::abs(mass - 1) < 1e-3);
    for (std::size_t i = 0; xs[i] < -0.1; ++i) CHECK(std::abs(f[i]) < 1e-6);
}

TEST_CASE("curve tables validate their invariants") {
    const auto t = cdf_curve({0.6, 0.8, 1.0});
    CHECK(t.values.size() == 3);
    CHECK(t.method == CurveMethod::quadrature);
    CurveTable bad = t;
    bad.abscissae = {0.8, 0.6, 1.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = t;
    bad.method = CurveMethod::montecarlo;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
