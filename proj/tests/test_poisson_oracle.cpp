// Monte Carlo route: generator known-answer vectors, a deterministic
// realization with a closed-form root, distributional checks against the
// closed-form law, and the invariances of the lazy sampler.

#include "zerofree/philox.hpp"
#include "zerofree/poisson_oracle.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>

using namespace zerofree;

namespace {

constexpr double kPi = std::numbers::pi;

double cdf_closed(double c) { return 2 * c / kPi * std::sin(kPi / (2 * c)); }

std::vector<double> sigmas_of(const std::vector<SigmaSample>& s) {
    std::vector<double> v;
    for (const auto& x : s) v.push_back(x.sigma);
    return v;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("Poisson realizations: determinism, ordering and counts") {
    const auto a = sample_poisson(2.0, 500, 7, 3), b = sample_poisson(2.0, 500, 7, 3);
    CHECK(a.points == b.points);
    CHECK_NOTHROW(a.validate());
    CHECK(a.points != sample_poisson(2.0, 500, 7, 4).points);
    double total = 0;
    for (std::uint32_t s = 0; s < 40; ++s) total += double(sample_poisson(1.0, 250, 11, s).points.size());
    // mean 250, standard error sqrt(250/40) = 2.5
    CHECK(std::abs(total / 40 - 250) < 12.5);
    CHECK_THROWS_AS(sample_poisson(-1.0, 10, 1, 0), DomainError);
}

TEST_CASE("solve_sigma on the integers finds the root of zeta(2 sigma) = 2") {
    PoissonRealization r;
    for (int k = 1; k <= 100000; ++k) r.points.push_back(k);
    r.intensity = 1;
    r.horizon = 100000.5;
    const auto s = solve_sigma(r);
    CHECK(s.sigma == doctest::Approx(0.864323619499).epsilon(1e-10));
    CHECK(std::abs(sigma_equation(r, s.sigma)) < 1e-12);
    PoissonRealization one;
    one.points = {1.0};
    one.horizon = 2;
    CHECK_THROWS_AS(solve_sigma(one), NoRootError);
}

TEST_CASE("sampler is independent of thread count and horizon") {
    MonteCarloConfig cfg;
    cfg.seed = 5;
    cfg.threads = 1;
    const auto one = sigmas_of(sample_sigmas(cfg, 300));
    cfg.threads = 3;
    CHECK(sigmas_of(sample_sigmas(cfg, 300)) == one);
    cfg.base_horizon = 128;
    const auto doubled = sigmas_of(sample_sigmas(cfg, 300));
    double worst = 0;
    for (std::size_t i = 0; i < one.size(); ++i) worst = std::max(worst, std::abs(one[i] - doubled[i]));
    CHECK(worst < 1e-6);
    CHECK(sample_sigma(cfg, 17).sigma == sample_sigma(cfg, 17).sigma);
}

TEST_CASE("empirical law agrees with the closed form; intensity does not matter") {
    MonteCarloConfig cfg;
    cfg.seed = 2024;
    const auto s1 = sigmas_of(sample_sigmas(cfg, 3000));
    for (double x : s1) CHECK(x > 0.5);
    // Critical value at level 10⁻³: 1.95/√n.
    CHECK(ks_one_sample(s1, cdf_closed) < 1.95 / std::sqrt(3000.0));
    cfg.intensity = 0.5;
    cfg.seed = 77;
    const auto s2 = sigmas_of(sample_sigmas(cfg, 3000));
    CHECK(ks_two_sample(s1, s2) < 1.95 * std::sqrt(2.0 / 3000));
    CHECK(ks_two_sample(s1, s1) == 0.0);
}

TEST_CASE("conditional sum sampler matches Fourier inversion") {
    const auto x = sample_conditional_sum(2.0, 1.0, 20000, 99);
    std::vector<double> grid;
    for (double g = 0.05; g <= 6; g += 0.05) grid.push_back(g);
    const auto f = conditional_cdf_grid(2.0, 1.0, grid);
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double emp = double(std::upper_bound(sorted.begin(), sorted.end(), grid[i]) - sorted.begin()) / x.size();
        ks = std::max(ks, std::abs(emp - f[i]));
    }
    CHECK(ks < 0.015);
    for (double v : x) CHECK(v > 0);
}

TEST_CASE("KS on curve tables requires a shared grid") {
    CurveTable a, b;
    a.abscissae = {0.6, 0.7};
    a.values = {0.1, 0.2};
    a.err_estimates = {0, 0};
    b = a;
    b.abscissae = {0.6, 0.8};
    CHECK_THROWS_AS(ks_distance(a, b), GridMismatchError);
    CHECK(ks_distance(a, a) == 0.0);
}

TEST_CASE("report: schema, determinism and the small-sample flag") {
    MonteCarloConfig cfg;
    const std::vector<double> grid{0.6, 0.8, 1.0, 1.5};
    const auto small = monte_carlo_report(10, cfg, grid);
    CHECK(small.wide_uncertainty);
    const auto text = to_json(monte_carlo_report(1000, cfg, grid));
    CHECK(text == to_json(monte_carlo_report(1000, cfg, grid)));
    const auto j = nlohmann::json::parse(text);
    for (const char* key : {"n_samples", "seed", "intensity", "c_grid", "empirical_cdf", "analytic_cdf",
                            "ks_vs_analytic", "failed_samples", "wide_uncertainty"})
        CHECK(j.contains(key));
    CHECK(j["empirical_cdf"].size() == grid.size());
    CHECK_FALSE(j["wide_uncertainty"].get<bool>());
}
