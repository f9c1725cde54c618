// Lattices: enumeration against brute force, Epstein sums against Dirichlet
// L-function closed forms (4ζ(s)β(s) for Z², 6ζ(s)L(s,χ₋₃) for the hexagonal
// lattice, values from mpmath), and the abscissa σ̃.

#include "zerofree/lattice_zeta.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

using namespace zerofree;

namespace {

// Primitive ±pairs with |v| ≤ R for a 2D basis by scanning a coordinate box.
std::map<long long, long> brute_force_shells(const LatticeBasis& b, double radius, int box) {
    std::map<long long, long> shells;  // key: round(|v|² · 1e9)
    for (int i = -box; i <= box; ++i)
        for (int j = -box; j <= box; ++j) {
            if (std::gcd(i, j) != 1) continue;
            if (j < 0 || (j == 0 && i < 0)) continue;  // one of ±v
            const Eigen::Vector2d v = i * b.rows.row(0).transpose() + j * b.rows.row(1).transpose();
            if (v.norm() <= radius * (1 + 1e-12)) ++shells[std::llround(v.squaredNorm() * 1e9)];
        }
    return shells;
}

}  // namespace

TEST_CASE("basis construction, normalization and validation") {
    const auto b = make_basis({{2, 0}, {0.6, 2}});
    CHECK_FALSE(b.normalized);
    const auto n = normalize_covolume(b);
    CHECK(n.normalized);
    CHECK(std::abs(std::abs(n.rows.determinant()) - 1) < 1e-14);
    CHECK_THROWS_AS(make_basis({{1, 2}, {2, 4}}), SingularBasisError);
    CHECK_THROWS_AS(make_basis({{1, 2, 3}, {2, 4}}), DomainError);
    CHECK_THROWS_AS(lattice_from_json("{\"dimension\": 2}"), DomainError);
    const auto j = lattice_from_json("{\"dimension\": 2, \"basis\": [[1, 0], [0.3, 1]]}");
    CHECK(j.normalized);
    CHECK(j.rows(1, 0) == 0.3);
}

TEST_CASE("LLL keeps the lattice and shortens the basis") {
    const auto b = make_basis({{1, 0}, {37.3, 1}});
    const auto r = lll_reduce(b);
    CHECK(std::abs(std::abs(r.rows.determinant()) - 1) < 1e-12);
    CHECK(r.rows.row(0).norm() < 1.01);
    CHECK(r.rows.row(1).norm() < 1.2);
    // integer change of basis
    const Eigen::Matrix2d u = r.rows * b.rows.inverse();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) CHECK(std::abs(u(i, k) - std::round(u(i, k))) < 1e-9);
}

TEST_CASE("shell enumeration of Z^2 matches brute force up to R = 10 exactly") {
    const auto z2 = make_basis({{1, 0}, {0, 1}});
    const auto spectrum = enumerate_shells(z2, 10);
    CHECK_NOTHROW(spectrum.validate());
    const auto brute = brute_force_shells(z2, 10, 11);
    REQUIRE(spectrum.shells.size() == brute.size());
    auto it = brute.begin();
    for (const auto& s : spectrum.shells) {
        CHECK(std::llround(s.length * s.length * 1e9) == it->first);
        CHECK(s.primitive_pair_count == it->second);
        ++it;
    }
    CHECK(spectrum.shells[0].primitive_pair_count == 2);
    CHECK(spectrum.shells[1].length == doctest::Approx(std::sqrt(2.0)));
    CHECK(spectrum.shells[2].primitive_pair_count == 4);
}

TEST_CASE("property: enumeration matches brute force on random lattices") {
    for (std::uint32_t k = 0; k < 20; ++k) {
        const auto b = random_lattice_2d(31, k);
        const auto reduced = lll_reduce(b);
        const auto spectrum = enumerate_shells(b, 4);
        // |c_i| ≤ R·sqrt((G⁻¹)_ii) bounds the coordinates of vectors with |v| ≤ R.
        const Eigen::Matrix2d gram_inv = (reduced.rows * reduced.rows.transpose()).inverse();
        const int box = int(std::ceil(4 * std::sqrt(gram_inv.diagonal().maxCoeff()))) + 1;
        const auto brute = brute_force_shells(reduced, 4, box);
        std::int64_t brute_pairs = 0;
        for (const auto& [key, count] : brute) brute_pairs += count;
        CHECK(spectrum.pair_count() == brute_pairs);
        CHECK(spectrum.m_L == doctest::Approx(shortest_vector_length(b)).epsilon(1e-12));
    }
}

TEST_CASE("enumerate_vectors returns both signs") {
    const auto v = enumerate_vectors(make_basis({{1, 0}, {0, 1}}), 1.5);
    CHECK(v.size() == 8);  // (±1,0), (0,±1), (±1,±1)
}

TEST_CASE("hexagonal lattice: first shell and Epstein value") {
    const double s = std::sqrt(2 / std::sqrt(3.0));
    const auto hex = make_basis({{s, 0}, {s / 2, s * std::sqrt(3.0) / 2}});
    const auto spectrum = enumerate_shells(hex, 1.2);
    CHECK(spectrum.shells[0].length == doctest::Approx(1.074569931824).epsilon(1e-11));
    CHECK(spectrum.shells[0].primitive_pair_count == 3);
    CHECK(std::abs(epstein_zeta_theta(hex, 2.0).value - 5.78335929967867231) < 1e-11);
    CHECK_THROWS_AS(sigma_tilde(hex), MultipleMinimaError);
}

TEST_CASE("Riemann zeta and unit-ball volumes") {
    CHECK(riemann_zeta(2.5) == doctest::Approx(1.34148725725091718).epsilon(1e-14));
    CHECK(riemann_zeta(1.1) == doctest::Approx(10.5844484649508010).epsilon(1e-13));
    CHECK(riemann_zeta(7.0) == doctest::Approx(1.00834927738192283).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4 * std::numbers::pi / 3));
}

TEST_CASE("Epstein zeta of Z^2 against 4 zeta(s) beta(s)") {
    const auto z2 = make_basis({{1, 0}, {0, 1}});
    CHECK(std::abs(epstein_zeta_theta(z2, 2.0).value - 6.02681203969194012) < 1e-12);
    CHECK(std::abs(epstein_zeta_theta(z2, 3.0).value - 4.65891361560384344) < 1e-12);
    const auto real = epstein_zeta_real(z2, 2.0, 1e-4);
    CHECK(std::abs(real.value - 6.02681203969194012) < real.tail_bound + 1e-10);
    CHECK(real.tail_bound <= 1e-4 * (1 + 1e-12));
    CHECK_THROWS_AS(epstein_zeta_real(z2, 1.0), DomainError);
}

TEST_CASE("sigma tilde: Z^2 is degenerate, the sheared lattice is stable") {
    CHECK_THROWS_AS(sigma_tilde(make_basis({{1, 0}, {0, 1}})), MultipleMinimaError);
    const auto b = make_basis({{1, 0}, {0.3, 1}});
    const auto r = sigma_tilde(b);
    CHECK(r.sigma_tilde == doctest::Approx(3.683656699887823).epsilon(1e-12));
    CHECK(r.m_L == doctest::Approx(1.0));
    CHECK(std::abs(sigma_tilde_theta(b, 2 * r.radius) - r.sigma_tilde) < 1e-8);
    // The root α(σ̃) = 0 over a large shell spectrum with the continuum tail.
    const auto spectrum = enumerate_shells(b, 60);
    CHECK(std::abs(sigma_tilde_for_spectrum(spectrum, 1e-13, true) - r.sigma_tilde) < 1e-9);
    CHECK(alpha_function(spectrum, r.sigma_tilde + 0.1) > 0);
}

TEST_CASE("property: random lattices are Haar draws with finite sigma tilde") {
    long attempts = 0;
    for (std::uint32_t k = 0; k < 200; ++k) {
        const auto s = random_lattice_2d_sample(8, k);
        attempts += s.attempts;
        CHECK(std::abs(s.x) <= 0.5);
        CHECK(s.x * s.x + s.y * s.y >= 1);
        CHECK(std::abs(std::abs(s.basis.rows.determinant()) - 1) < 1e-12);
        const auto r = sigma_tilde(s.basis);
        CHECK(std::isfinite(r.sigma_tilde));
        CHECK(r.sigma_tilde > 1);
    }
    // Acceptance rate of the rejection step ≈ (π/3)/(2/√3) = 0.9069.
    CHECK(std::abs(200.0 / attempts - 0.9069) < 0.06);
    CHECK(random_lattice_2d(8, 3).rows == random_lattice_2d(8, 3).rows);
}
