#pragma once
// Monte Carlo route to the law of σ: Poisson realizations, the root σ of
// x₁^{-2σ} = Σ_{j≥2} x_j^{-2σ}, empirical CDFs and the conditional sum of
// Σ_{j≥2} T_j^{-a} given T₁ = δ.
//
// The batch sampler does not truncate at a fixed horizon. Each realization is
// a lazily expanded dyadic tree on [0, 2^40): the root count is Poisson, each
// split is Binomial(N, 1/2), and cells whose expected count is at most 16 are
// expanded into points by normalized exponential gaps. Points are exact up to
// the horizon H; beyond it, unexpanded cells contribute the conditional mean
// of their sum given the count, and cells are split greedily until the
// ignored within-cell fluctuation moves σ by less than `sigma_tol`. The mass
// beyond 2^40 enters through its mean. Every random draw is keyed by
// (seed, sample, node), so enlarging H or refining a cell never changes the
// realization, only how much of it is resolved.

#include "zerofree/limit_distribution.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace zerofree {

/// Points of a Poisson process on (0, horizon].
struct PoissonRealization {
    std::vector<double> points;  ///< strictly increasing
    double intensity = 1;
    double horizon = 0;
    std::uint64_t seed = 0;
    std::uint32_t stream_id = 0;

    void validate() const;
};

/// A solved abscissa with the tail mass it included.
struct SigmaSample {
    double sigma = 0;
    double tail_correction = 0;  ///< Σ x_j^{-2σ} credited beyond the exact points (≥ 0)
    double horizon_used = 0;
};

/// Exponential-gap simulation on (0, horizon]; deterministic in (seed, stream_id).
PoissonRealization sample_poisson(double intensity, double horizon, std::uint64_t seed, std::uint32_t stream_id);

/// g(σ) = x₁^{-2σ} - Σ_{j≥2} x_j^{-2σ} - intensity·horizon^{1-2σ}/(2σ-1).
double sigma_equation(const PoissonRealization& real, double sigma);

/// Root of g by bracketed bisection. The mean tail beyond the horizon is added
/// to the sum; HorizonError when the standard deviation of that tail exceeds
/// 10⁻⁶·x₁^{-2σ} at the root. NoRootError for fewer than two points.
SigmaSample solve_sigma(const PoissonRealization& real, double sigma_hi = 2.0, double tol = 1e-13);

/// Settings of the batch sampler.
struct MonteCarloConfig {
    double intensity = 1;
    double base_horizon = 64;  ///< exact-point region [0, H), in units of 1/intensity
    std::uint64_t seed = 42;
    double sigma_tol = 2.5e-7; ///< bound on the σ error from unresolved cells
    int max_doublings = 6;     ///< horizon doublings when [0, H) holds no point
    unsigned threads = 0;      ///< 0: hardware concurrency

    void validate() const;
};

/// σ for realization `index` (independent of thread count and of H).
SigmaSample sample_sigma(const MonteCarloConfig& cfg, std::uint32_t index);

/// σ for realizations 0..n-1 (parallel; results in index order).
std::vector<SigmaSample> sample_sigmas(const MonteCarloConfig& cfg, std::uint32_t n);

/// Empirical CDF on `c_grid` from n samples (records the seed).
CurveTable empirical_cdf(std::uint32_t n_samples, const MonteCarloConfig& cfg, const std::vector<double>& c_grid);
/// Same from precomputed σ values.
CurveTable empirical_cdf_from(const std::vector<double>& sigmas, const std::vector<double>& c_grid, std::uint64_t seed);

/// Unit-intensity Poisson process on (δ, ∞): Σ x_j^{-a}, exact on (δ, δ+H] and
/// by conditional cell means on a geometric grid beyond.
std::vector<double> sample_conditional_sum(double a, double delta, std::uint32_t n_samples, std::uint64_t seed);

/// max |empirical - analytic| over a shared grid (GridMismatchError otherwise).
double ks_distance(const CurveTable& empirical, const CurveTable& analytic);

/// Two-sample Kolmogorov–Smirnov statistic.
double ks_two_sample(std::vector<double> x, std::vector<double> y);

/// sup |F_n - F| against a continuous CDF, evaluated exactly at the sample points.
template <class Cdf>
double ks_one_sample(std::vector<double> x, Cdf&& cdf_fn);

/// Monte Carlo report (JSON fields n_samples, seed, intensity, c_grid,
/// empirical_cdf, ks_vs_analytic, failed_samples, wide_uncertainty).
struct MonteCarloReport {
    std::uint32_t n_samples = 0;
    std::uint64_t seed = 0;
    double intensity = 1;
    std::vector<double> c_grid;
    std::vector<double> empirical;
    std::vector<double> analytic;
    double ks_vs_analytic = 0;
    std::uint32_t failed_samples = 0;
    bool wide_uncertainty = false;  ///< n < 10³: the KS value is only indicative
};

MonteCarloReport monte_carlo_report(std::uint32_t n_samples, const MonteCarloConfig& cfg,
                                    const std::vector<double>& c_grid);

std::string to_json(const MonteCarloReport& report);

// ---------------------------------------------------------------------------

template <class Cdf>
double ks_one_sample(std::vector<double> x, Cdf&& cdf_fn) {
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf_fn(x[i]);
        d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
    }
    return d;
}

}  // namespace zerofree
