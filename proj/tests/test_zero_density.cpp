// Zero densities: Bessel-product integrals (scaling, the integration-by-parts
// identity, an arbitrary-precision reference), ν^(K) (shift invariance,
// nonnegativity, support) and the argument-principle count as an oracle for
// the integral of ν^(K): every exponential polynomial has (λ_K − λ₁)/2π zeros
// per unit height over its whole strip.

#include "zerofree/zero_density.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace zerofree;

namespace {

ExponentSequence sequence(std::vector<double> l) {
    ExponentSequence e;
    e.lambdas = std::move(l);
    return e;
}

}  // namespace

TEST_CASE("exponent sequences") {
    const auto e = log_integer_exponents(6);
    CHECK(e.size() == 6);
    CHECK(e.lambdas[3] == doctest::Approx(2 * std::log(4.0)));
    CHECK_THROWS_AS(sequence({0, 1, 1}).validate(), DomainError);
    CHECK_THROWS_AS(exponents_from_points({1, 2}, 3), DomainError);
    CHECK(exponents_from_points({0.5, 1.5, 2.0}, 2).source == ExponentSource::poisson);
    CHECK(to_string(ExponentSource::lattice) == "lattice");
}

TEST_CASE("lattice exponents need distinct shells") {
    const auto generic = enumerate_shells(make_basis({{1, 0}, {0.3, 1.1}}), 4);
    const auto e = lattice_exponents(generic, 6);
    CHECK(e.source == ExponentSource::lattice);
    CHECK(e.lambdas[0] == doctest::Approx(2 * std::log(generic.m_L)));
    const auto z2 = enumerate_shells(make_basis({{1, 0}, {0, 1}}), 4);
    CHECK_THROWS_AS(lattice_exponents(z2, 5), DegenerateSpectrumError);
    CHECK_THROWS_AS(nu_for_lattice(z2, 5, {0.5}), DegenerateSpectrumError);
}

TEST_CASE("Bessel product: reference value for equal coefficients") {
    // ∫₀^∞ J₀(r)⁶ r dr (mpmath: quadrature to 600π + π/4 plus the averaged tail)
    const auto r = bessel_product_integral(std::vector<double>(6, 1.0), {});
    CHECK(r.value > 0);
    CHECK(std::abs(r.value - 0.3368279617546589) < 1e-8);
}

TEST_CASE("Bessel product: scaling and argument checks") {
    const std::vector<double> c{0.3, 0.5, 0.7, 0.2, 0.9, 0.4};
    for (double mu : {0.25, 2.5, 7.0}) {
        std::vector<double> scaled = c;
        for (double& v : scaled) v *= mu;
        CHECK(std::abs(bessel_product_integral(scaled, {}).value * mu * mu - bessel_product_integral(c, {}).value) <
              1e-12);
        CHECK(std::abs(bessel_product_integral(scaled, {1, 4}).value * mu * mu -
                       bessel_product_integral(c, {1, 4}).value) < 1e-12);
    }
    CHECK_THROWS_AS(bessel_product_integral({1, 1, 1, 1}, {}), ConvergenceError);
    CHECK_THROWS_AS(bessel_product_integral({1, 1, 1, 1, -1}, {}), DomainError);
    CHECK_THROWS_AS(bessel_product_integral({1, 1, 1, 1, 1}, {2}), DomainError);
}

TEST_CASE("property: integration-by-parts identity on random coefficient sets") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int t = 0; t < 6; ++t) {
        std::vector<double> c(6 + t % 3);
        for (double& v : c) v = u(gen);
        for (int a = 0; a < int(c.size()); a += 2) CHECK(bessel_identity_residual(c, a) < 1e-10);
    }
}

TEST_CASE("nu: zero outside the strip, nonnegative inside, shift invariant") {
    const auto e = log_integer_exponents(6);
    const auto [lo, hi] = zero_strip(e);
    CHECK(lo == doctest::Approx(-1.559447866850564).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.6640123611537246).epsilon(1e-12));
    CHECK(std::abs(nu_k(e, hi + 0.3)) < 1e-6);
    CHECK(std::abs(nu_k(e, lo - 0.3)) < 1e-6);
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> shift(-3, 3);
    for (double s = lo; s <= hi; s += 0.2) {
        const double v = nu_k(e, s);
        CHECK(v >= -1e-6);
        auto moved = e;
        const double alpha = shift(gen);
        for (double& l : moved.lambdas) l += alpha;
        CHECK(std::abs(nu_k(moved, s) - v) < 1e-6);
    }
    CHECK_THROWS_AS(nu_k_with_error(e, 0.1, {}, 0.5), DomainError);
    CHECK_THROWS_AS(nu_k(log_integer_exponents(4), 0.1), ConvergenceError);
}

TEST_CASE("zero counts for 1 + exp(-s)") {
    const auto two = sequence({0, 1});
    const auto z = count_zeros_rectangle(two, -1, 1, 0, 20);
    CHECK(z.count == 3);
    CHECK(z.winding_residual < 0.01);
    CHECK(count_zeros_rectangle(two, -1, 1, 0, 2).count == 0);
    // A zero on the boundary (s = iπ) triggers the τ jitter.
    const auto j = count_zeros_rectangle(two, -1, 1, std::numbers::pi, 20);
    CHECK(j.jitter_attempts >= 1);
    CHECK(j.count == 2);
}

TEST_CASE("integral of nu equals the total zero frequency") {
    // Q-independent exponents; over the whole strip the count per unit height
    // is (λ_K − λ₁)/2π for every exponential polynomial.
    const auto e = sequence({0, std::log(2.0), 1, std::numbers::pi / 2, std::numbers::e - 1, std::sqrt(5.0)});
    QuadratureSpec spec;
    spec.abs_tol = 1e-8;
    const auto [lo, hi] = zero_strip(e);
    const auto h = h_frequency(e, lo - 1, hi + 1, spec);
    CHECK(std::abs(h.value - std::sqrt(5.0) / (2 * std::numbers::pi)) < 1e-6);
    const auto z = count_zeros_rectangle(e, lo - 0.5, hi + 0.5, 0, 1000);
    CHECK(std::abs(z.count / 1000.0 / h.value - 1) < 0.05);
    CHECK(h_frequency(e, 0.2, 0.2).value == 0.0);
    const double mid = 0.5 * (lo + hi);
    CHECK(std::abs(h_frequency(e, lo, mid, spec).value + h_frequency(e, mid, hi, spec).value - h.value) < 1e-8);
}

TEST_CASE("nu for a generic lattice vanishes beyond sigma tilde") {
    const auto basis = make_basis({{1, 0}, {0.3, 1.1}});
    const auto b = normalize_covolume(basis);
    const double st = sigma_tilde(b).sigma_tilde;
    const auto spectrum = enumerate_shells(b, 4);
    const auto curve = nu_for_lattice(spectrum, 6, {1.2 * st});
    CHECK(std::abs(curve.values[0]) < 1e-4);
    const auto rescaled = nu_for_lattice(spectrum, 6, {0.5}, true);
    CHECK(rescaled.values[0] == doctest::Approx(4 * nu_for_lattice(spectrum, 6, {1.0}).values[0]).epsilon(1e-12));
}
