#pragma once
// Analytic route to the law of the zero-free abscissa σ: CDF and density by
// oscillatory quadrature, the two asymptotic regimes, the constants K1/K2 and
// the conditional (given T1 = δ) characteristic function and density.

#include "zerofree/special_functions.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace zerofree {

/// How a curve was computed.
enum class CurveMethod { quadrature, residue, montecarlo, asymptotic };

std::string to_string(CurveMethod m);

/// Abscissa/value pairs with per-point error estimates.
struct CurveTable {
    std::vector<double> abscissae;
    std::vector<double> values;
    CurveMethod method = CurveMethod::quadrature;
    std::vector<double> err_estimates;
    std::optional<std::uint64_t> seed;  ///< recorded for Monte Carlo curves

    /// Throws DomainError when the invariants (ascending abscissae, matching
    /// lengths, finite nonnegative errors, seed for Monte Carlo) fail.
    void validate() const;
};

/// Quadrature controls for the oscillatory integrals.
struct QuadratureSpec {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    /// Number of half-periods [kπ, (k+1)π] integrated directly before the tail.
    int period_segments = 40;
    /// Order of the frequency expansion used for the tail beyond the last segment.
    int acceleration_depth = 8;
    /// Budget of integrand evaluations.
    long max_evals = 2'000'000;

    void validate() const;
};

/// A value with its a-posteriori error estimate.
struct QuadratureResult {
    double value = 0;
    double err_estimate = 0;
};

/// Prob(σ ≤ c) with error estimate (c > 1/2).
QuadratureResult cdf_with_error(double c, const QuadratureSpec& spec = {});
double cdf(double c, const QuadratureSpec& spec = {});

/// Density f(c) = d/dc Prob(σ ≤ c) with error estimate (c > 1/2).
QuadratureResult density_with_error(double c, const QuadratureSpec& spec = {});
double density(double c, const QuadratureSpec& spec = {});

/// Tabulate cdf/density on a grid.
CurveTable cdf_curve(const std::vector<double>& cs, const QuadratureSpec& spec = {});
CurveTable density_curve(const std::vector<double>& cs, const QuadratureSpec& spec = {});

enum class AsymptoticRegime { near_half, large_c };

/// 2 - K1 (c - 1/2)² (near_half, c < 0.6) or K2 c^{-3} (large_c, c > 3).
double density_asymptotic(double c, AsymptoticRegime regime);

/// K2 = (1/2π) Im ∫₀^∞ (F1² + F2)/y · e^{-iy} dy.
QuadratureResult constant_k2(const QuadratureSpec& spec = {});
/// K1 = 20 + (8/π) ∫₀^∞ (3y^{-4} + (3/2)y^{-2} - Im H̃2(y)) dy.
QuadratureResult constant_k1(const QuadratureSpec& spec = {});

/// Lazily computed and cached K1, K2 (used by the asymptotic forms).
double stored_k1();
double stored_k2();

/// Im ∫₀^∞ F1(y)/y · e^{-iy} dy (vanishes).
QuadratureResult k2_companion(const QuadratureSpec& spec = {});
/// ∫₀^∞ (Im H̃1(y) - 2y^{-2}) dy (vanishes).
QuadratureResult k1_companion(const QuadratureSpec& spec = {});
/// Im of the K2 integrand integrated over the half-periods [kπ, (k+1)π], k < count.
std::vector<double> k2_half_period_contributions(int count);
/// Integrand of K1 at y; the small-y limit 17/6 is returned below y = 10⁻³.
double k1_integrand(double y);

/// |∫_{y0}^{1} e^{-iy} y^{-1-1/a} / Φ_a(y) dy| and its real part: the integral
/// without the imaginary part, which diverges as y0 → 0.
cplx untaken_imaginary_partial_integral(double c, double y0);

/// φ_{a,δ}(t), the characteristic function of Σ_{j≥2} T_j^{-a} given T_1 = δ.
cplx conditional_char_function(double a, double delta, double t);

/// Density of the conditional sum by Fourier inversion.
double conditional_density(double a, double delta, double x, const QuadratureSpec& spec = {});
/// Density and CDF on a grid (the characteristic function is sampled once).
std::vector<double> conditional_density_grid(double a, double delta, const std::vector<double>& xs);
std::vector<double> conditional_cdf_grid(double a, double delta, const std::vector<double>& xs);

}  // namespace zerofree
