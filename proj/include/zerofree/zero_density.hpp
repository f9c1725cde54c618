#pragma once
// Zero densities of finite Dirichlet series f(s) = Σ_j e^{-λ_j s}: the Jessen
// density ν^(K)(σ) built from Bessel-product integrals, its integral over a
// σ-interval (the asymptotic number of zeros per unit height) and a direct
// argument-principle count of zeros in rectangles as an independent oracle.
//
// With c_j = e^{-λ_j σ},
//
//   ν^(K)(σ) = (1/2π) Σ_{a,b} ± λ_a λ_b c_a c_b I(a, b),
//   I(a, a) = ∫₀^∞ Π_j J₀(c_j r) r dr,
//   I(a, b) = ∫₀^∞ J₁(c_a r) J₁(c_b r) Π_{j≠a,b} J₀(c_j r) r dr   (a ≠ b),
//
// with + on the diagonal and - off it.

#include "zerofree/lattice_zeta.hpp"
#include "zerofree/limit_distribution.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace zerofree {

/// Where an exponent list came from.
enum class ExponentSource { lattice, poisson, synthetic };

std::string to_string(ExponentSource s);

/// Strictly increasing exponents λ₁ < … < λ_K.
struct ExponentSequence {
    std::vector<double> lambdas;
    ExponentSource source = ExponentSource::synthetic;

    /// Throws DomainError unless nonempty, finite and strictly increasing.
    void validate() const;
    int size() const { return int(lambdas.size()); }
};

/// λ_j = 2 log j for j = 1..K.
ExponentSequence log_integer_exponents(int k);
/// λ_j = 2 log(x_j) for increasing positive points (Poisson source).
ExponentSequence exponents_from_points(const std::vector<double>& points, int k);
/// λ_j = 2 log |v_j| over the first K shells; DegenerateSpectrumError when one
/// of them holds more than one primitive pair (repeated exponents).
ExponentSequence lattice_exponents(const ShellSpectrum& spectrum, int k);

/// ∫₀^∞ Π_j J_{α_j}(c_j r) r dr with its error estimate.
struct BesselIntegral {
    double value = 0;
    double err_estimate = 0;
    double split_radius = 0;  ///< direct quadrature on [0, R], Hankel expansion beyond
    int frequencies = 0;      ///< sign patterns in the expanded tail
};

/// Product integral with α = 1 at the (zero or two) `j1_positions`, else 0.
/// Gauss–Legendre over periods of the fastest product frequency on [0, R] with
/// c_min·R ≈ 30; beyond R every factor is replaced by its Hankel expansion of
/// order spec.acceleration_depth and each frequency Σ±c_j is integrated in closed
/// form through an incomplete gamma function. ConvergenceError for K < 5.
BesselIntegral bessel_product_integral(const std::vector<double>& c, const std::vector<int>& j1_positions,
                                       const QuadratureSpec& spec = {});

/// |c_a ∫Π J₀ - Σ_{b≠a} c_b ∫ J₁(c_a r) J₁(c_b r) Π J₀| for one index a.
double bessel_identity_residual(const std::vector<double>& c, int a, const QuadratureSpec& spec = {});

/// ν^(K)(σ) with error estimate. Pairs with e^{-(λ_a+λ_b)σ} < 10⁻¹⁶ of the
/// largest weight are skipped. ConvergenceError for K < 5; DomainError when σ
/// is not above `sigma_guard`.
QuadratureResult nu_k_with_error(const ExponentSequence& exponents, double sigma, const QuadratureSpec& spec = {},
                                 double sigma_guard = -std::numeric_limits<double>::infinity());
double nu_k(const ExponentSequence& exponents, double sigma, const QuadratureSpec& spec = {});

/// ν^(K) on a σ-grid (CSV `sigma,nu,err_estimate`).
CurveTable nu_curve(const ExponentSequence& exponents, const std::vector<double>& sigma_grid,
                    const QuadratureSpec& spec = {});

/// ∫_{σ₁}^{σ₂} ν^(K)(σ) dσ: tanh-sinh quadrature on the pieces between
/// the kinks of ν^(K) (zeros of the signed sums Σ ±e^{-λ_j σ}), clipped to zero_strip.
QuadratureResult h_frequency(const ExponentSequence& exponents, double sigma1, double sigma2,
                             const QuadratureSpec& spec = {});

/// ν_L on a grid from the first K shells; with `rescaled`, σ ↦ n²ν_L(nσ).
CurveTable nu_for_lattice(const ShellSpectrum& spectrum, int k, const std::vector<double>& sigma_grid,
                          bool rescaled = false, const QuadratureSpec& spec = {});

/// Number of zeros of f in (σ₁, σ₂) × (τ₁, τ₂) by the argument principle.
struct ZeroCountResult {
    long count = 0;
    double sigma1 = 0, sigma2 = 0, tau1 = 0, tau2 = 0;  ///< rectangle actually used
    double winding_residual = 0;                        ///< |winding - count|
    long evaluations = 0;
    int jitter_attempts = 0;
};

/// Boundary sampled with steps refined until consecutive phases of f differ by
/// < π/2. When |f| nearly vanishes on the boundary the τ bounds are jittered;
/// BoundaryZeroError after 5 attempts.
ZeroCountResult count_zeros_rectangle(const ExponentSequence& exponents, double sigma1, double sigma2,
                                      double tau1, double tau2);

/// f(s) = Σ_j e^{-λ_j s}.
cplx dirichlet_polynomial(const ExponentSequence& exponents, cplx s);

/// Interval [σ_lo, σ_hi] outside which one term dominates the others, so f
/// has no zeros and ν^(K) vanishes.
std::pair<double, double> zero_strip(const ExponentSequence& exponents);

}  // namespace zerofree
