#pragma once
// Complex special functions behind every other module: incomplete gamma
// functions (and their s-derivatives), η_a, Φ_a, ξ(a), Π(y), F_k(y), Bessel
// J0/J1 and log-weighted oscillatory primitives.
//
// Branch convention: every fractional power and logarithm is principal,
// |arg u| < π, with the cut along the negative real axis.
//
// Scalar templates: the η_a/Φ_a family and the incomplete gamma kernels are
// templated on the real type so the pole finder can run in extended
// precision; the fixed-signature wrappers at the bottom operate on double.

#include "zerofree/errors.hpp"
#include "zerofree/quadrature.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace zerofree {

template <class Real>
using Complex = std::complex<Real>;

/// η_a and its derivatives use the power series when κ = |z| + Im z ≤ this radius
/// (κ = |w| + Re w with w = -iz measures the cancellation in the series).
inline constexpr double kEtaSeriesRadius = 8.0;

/// Maximum continued-fraction iterations before the asymptotic fallback.
inline constexpr int kMaxContinuedFraction = 500;

namespace detail {

template <class Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;
template <class Real>
inline constexpr Real euler_v = std::numbers::egamma_v<Real>;

template <class Real>
constexpr Real eps_v() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
bool is_nonpositive_integer(Real s) {
    return s <= 0 && std::floor(s) == s;
}

template <class Real>
bool is_finite(const Complex<Real>& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <class Real>
bool on_negative_axis(const Complex<Real>& z) {
    return z.imag() == 0 && z.real() < 0;
}

template <class Real>
Complex<Real> checked(const Complex<Real>& z, const char* where) {
    if (!is_finite(z)) throw ConvergenceError(std::string(where) + ": non-finite result");
    return z;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gamma, digamma, trigamma on the real line
// ---------------------------------------------------------------------------

/// Γ(x) for real x (libm tgamma; poles raise DomainError).
template <class Real>
Real gamma_fn(Real x) {
    if (detail::is_nonpositive_integer(x)) throw DomainError("gamma: pole at nonpositive integer");
    return std::tgamma(x);
}

/// Digamma ψ(x): upward recursion to x ≥ 20, then the Stirling-type series.
template <class Real>
Real digamma(Real x) {
    if (detail::is_nonpositive_integer(x)) throw DomainError("digamma: pole at nonpositive integer");
    Real acc = 0;
    while (x < 20) {
        acc -= 1 / x;
        x += 1;
    }
    const Real x2 = 1 / (x * x);
    const Real tail =
        x2 * (Real(1) / 12 -
              x2 * (Real(1) / 120 -
                    x2 * (Real(1) / 252 -
                          x2 * (Real(1) / 240 -
                                x2 * (Real(1) / 132 - x2 * (Real(691) / 32760 - x2 / 12))))));
    return acc + std::log(x) - 1 / (2 * x) - tail;
}

/// Trigamma ψ'(x): upward recursion to x ≥ 20, then the asymptotic series.
template <class Real>
Real trigamma(Real x) {
    if (detail::is_nonpositive_integer(x)) throw DomainError("trigamma: pole at nonpositive integer");
    Real acc = 0;
    while (x < 20) {
        acc += 1 / (x * x);
        x += 1;
    }
    const Real ix = 1 / x, x2 = ix * ix;
    const Real tail =
        ix * x2 *
        (Real(1) / 6 -
         x2 * (Real(1) / 30 -
               x2 * (Real(1) / 42 -
                     x2 * (Real(1) / 30 - x2 * (Real(5) / 66 - x2 * (Real(691) / 2730 - x2 * Real(7) / 6))))));
    return acc + ix + x2 / 2 + tail;
}

// ---------------------------------------------------------------------------
// Incomplete gamma kernels
// ---------------------------------------------------------------------------

/// S_j(s, w) = Σ_k (-w)^k / (k! (s+k)^{j+1}) for j = 0, 1, 2; γ(s,w) = w^s S_0.
template <class Real>
struct GammaSeriesSums {
    Complex<Real> s0, s1, s2;
};

template <class Real>
GammaSeriesSums<Real> gamma_series_sums(Real s, Complex<Real> w) {
    if (detail::is_nonpositive_integer(s)) throw DomainError("gamma series: s is a nonpositive integer");
    using C = Complex<Real>;
    const Real tol = detail::eps_v<Real>() / 4;
    const Real aw = std::abs(w);
    C term(1, 0);  // (-w)^k / k!
    GammaSeriesSums<Real> out{C(0), C(0), C(0)};
    for (int k = 0; k < 100000; ++k) {
        const Real inv = 1 / (s + k);
        const C c0 = term * inv;
        out.s0 += c0;
        out.s1 += c0 * inv;
        out.s2 += c0 * inv * inv;
        if (k > aw && s + k > 0 && std::abs(c0) <= tol * std::abs(out.s0) &&
            std::abs(c0 * inv) <= tol * std::abs(out.s1))
            return out;
        term *= -w / Real(k + 1);
    }
    throw ConvergenceError("gamma series did not converge");
}

/// Result of the Legendre continued fraction for Γ(s, w):
/// Γ(s,w) = e^{-w} w^s h, ∂Γ/∂s = e^{-w} w^s (h log w + dh).
template <class Real>
struct GammaFraction {
    Complex<Real> h, dh;
    int iterations;
    bool converged;
};

/// Modified Lentz evaluation with forward-mode differentiation in s.
template <class Real>
GammaFraction<Real> upper_gamma_fraction(Real s, Complex<Real> w, int max_iter = kMaxContinuedFraction) {
    using C = Complex<Real>;
    const Real tiny = std::numeric_limits<Real>::min() * 1e10L;
    const Real tol = detail::eps_v<Real>();
    C b = w + Real(1) - s;
    const C db(-1, 0);
    C c = C(1 / tiny), dc(0);
    C d = Real(1) / b, dd = d * d;  // d' = -d² b'
    C h = d, dh = dd;
    for (int i = 1; i <= max_iter; ++i) {
        const Real an = -Real(i) * (Real(i) - s);
        const Real dan = Real(i);
        b += Real(2);
        C den = an * d + b;
        C dden = dan * d + an * dd + db;
        if (std::abs(den) < tiny) den = tiny;
        const C dnew = Real(1) / den;
        const C ddnew = -dnew * dnew * dden;
        C cnew = b + an / c;
        C dcnew = db + dan / c - an * dc / (c * c);
        if (std::abs(cnew) < tiny) cnew = tiny;
        const C del = dnew * cnew;
        const C ddel = ddnew * cnew + dnew * dcnew;
        dh = dh * del + h * ddel;
        h *= del;
        d = dnew;
        dd = ddnew;
        c = cnew;
        dc = dcnew;
        if (std::abs(del - Real(1)) <= tol && std::abs(ddel) <= tol * (std::abs(dh) + std::abs(h)))
            return {h, dh, i, true};
    }
    return {h, dh, max_iter, false};
}

/// Integration-by-parts asymptotic series e^{w} w^{1-s} Γ(s,w) ~ Σ_k (s-1)…(s-k) w^{-k},
/// truncated at the smallest term. Returns false if the smallest term exceeds tolerance.
template <class Real>
bool upper_gamma_asymptotic_scaled(Real s, Complex<Real> w, Complex<Real>& out) {
    using C = Complex<Real>;
    C term(1), sum(1);
    Real last = 1;
    for (int k = 1; k < 1000; ++k) {
        term *= (s - Real(k)) / w;
        const Real mag = std::abs(term);
        if (mag > last) break;
        sum += term;
        last = mag;
        if (mag <= detail::eps_v<Real>() * std::abs(sum)) {
            out = sum;
            return true;
        }
    }
    out = sum;
    return last <= 1e3 * detail::eps_v<Real>() * std::abs(sum);
}

namespace detail {

// Series path applies when the alternating series loses few digits:
// the cancellation factor is about e^{|w| + Re w}.
template <class Real>
bool prefer_series(Real s, const Complex<Real>& w) {
    const Real aw = std::abs(w);
    if (aw <= Real(1.5)) return true;
    const Real kappa = aw + w.real();
    return kappa <= Real(12) && aw <= Real(600) && s < Real(20);
}

// E1(w) = Γ(0, w) by its convergent series (small |w| or left half-plane).
template <class Real>
Complex<Real> expint_e1_series(const Complex<Real>& w) {
    using C = Complex<Real>;
    C term(1), sum(0);
    const Real aw = std::abs(w);
    for (int k = 1; k < 100000; ++k) {
        term *= -w / Real(k);
        const C c = term / Real(k);
        sum += c;
        if (k > aw && std::abs(c) <= eps_v<Real>() / 4 * std::abs(sum)) break;
    }
    return -euler_v<Real> - std::log(w) - sum;
}

// Γ(-m, w) for a nonnegative integer m via E1 and a finite sum.
template <class Real>
Complex<Real> upper_gamma_negative_integer_series(int m, const Complex<Real>& w) {
    using C = Complex<Real>;
    C finite(0);
    Real fact = 1;
    C wpow = w;
    for (int k = 0; k < m; ++k) {
        if (k > 0) fact *= k;
        finite += ((k % 2 == 0) ? fact : -fact) / wpow;
        wpow *= w;
    }
    Real mfact = 1;
    for (int k = 2; k <= m; ++k) mfact *= k;
    const C bracket = expint_e1_series(w) - std::exp(-w) * finite;
    return ((m % 2 == 0) ? Real(1) : Real(-1)) / mfact * bracket;
}

template <class Real>
void check_upper_args(Real s, const Complex<Real>& w, const char* where) {
    if (!std::isfinite(s) || !is_finite(w)) throw DomainError(std::string(where) + ": non-finite argument");
    if (w == Complex<Real>(0) && s <= 0) throw DomainError(std::string(where) + ": z = 0 requires s > 0");
    if (on_negative_axis(w)) throw DomainError(std::string(where) + ": z on the branch cut");
}

}  // namespace detail

/// Scaled upper incomplete gamma e^{w} Γ(s, w) (non-oscillatory on vertical lines).
template <class Real>
Complex<Real> upper_gamma_scaled(Real s, Complex<Real> w) {
    using C = Complex<Real>;
    detail::check_upper_args(s, w, "upper_gamma_scaled");
    if (w == C(0)) return C(gamma_fn(s));
    if (detail::prefer_series(s, w)) {
        C g;
        if (detail::is_nonpositive_integer(s))
            g = detail::upper_gamma_negative_integer_series<Real>(static_cast<int>(-s), w);
        else
            g = gamma_fn(s) - std::pow(w, s) * gamma_series_sums(s, w).s0;
        return detail::checked(std::exp(w) * g, "upper_gamma_scaled");
    }
    const auto frac = upper_gamma_fraction(s, w);
    if (frac.converged) return detail::checked(std::pow(w, s) * frac.h, "upper_gamma_scaled");
    C asym;
    if (upper_gamma_asymptotic_scaled(s, w, asym)) return std::pow(w, s - Real(1)) * asym;
    throw ConvergenceError("upper incomplete gamma: continued fraction and asymptotic series failed");
}

/// Upper incomplete gamma Γ(s, w) = ∫ along w + R_{>0} of u^{s-1} e^{-u} du.
template <class Real>
Complex<Real> upper_gamma(Real s, Complex<Real> w) {
    using C = Complex<Real>;
    detail::check_upper_args(s, w, "upper_gamma");
    if (w == C(0)) return C(gamma_fn(s));
    if (detail::prefer_series(s, w)) {
        if (detail::is_nonpositive_integer(s))
            return detail::checked(detail::upper_gamma_negative_integer_series<Real>(static_cast<int>(-s), w),
                                   "upper_gamma");
        return detail::checked(C(gamma_fn(s)) - std::pow(w, s) * gamma_series_sums(s, w).s0, "upper_gamma");
    }
    return detail::checked(std::exp(-w) * upper_gamma_scaled(s, w), "upper_gamma");
}

/// ∂/∂s Γ(s, w) = ∫ u^{s-1} log(u) e^{-u} du along the ray.
template <class Real>
Complex<Real> upper_gamma_ds(Real s, Complex<Real> w) {
    using C = Complex<Real>;
    detail::check_upper_args(s, w, "upper_gamma_ds");
    if (detail::is_nonpositive_integer(s)) throw DomainError("upper_gamma_ds: s is a nonpositive integer");
    const C logw = std::log(w);
    if (detail::prefer_series(s, w)) {
        const auto sums = gamma_series_sums(s, w);
        const Real g = gamma_fn(s);
        return detail::checked(C(g * digamma(s)) - std::pow(w, s) * (logw * sums.s0 - sums.s1), "upper_gamma_ds");
    }
    const auto frac = upper_gamma_fraction(s, w);
    if (!frac.converged) throw ConvergenceError("upper_gamma_ds: continued fraction did not converge");
    return detail::checked(std::exp(-w) * std::pow(w, s) * (frac.h * logw + frac.dh), "upper_gamma_ds");
}

/// Scaled derivative e^{w} ∂Γ(s,w)/∂s (non-oscillatory companion of upper_gamma_scaled).
template <class Real>
Complex<Real> upper_gamma_ds_scaled(Real s, Complex<Real> w) {
    detail::check_upper_args(s, w, "upper_gamma_ds_scaled");
    if (detail::prefer_series(s, w)) return std::exp(w) * upper_gamma_ds(s, w);
    const auto frac = upper_gamma_fraction(s, w);
    if (!frac.converged) throw ConvergenceError("upper_gamma_ds_scaled: continued fraction did not converge");
    return detail::checked(std::pow(w, s) * (frac.h * std::log(w) + frac.dh), "upper_gamma_ds_scaled");
}

/// Lower incomplete gamma γ(s, w); negative s handled by the upward recursion
/// γ(s,w) = (γ(s+1,w) + w^s e^{-w}) / s.
template <class Real>
Complex<Real> lower_gamma(Real s, Complex<Real> w) {
    using C = Complex<Real>;
    if (detail::is_nonpositive_integer(s)) throw DomainError("lower_gamma: s is a nonpositive integer");
    if (detail::on_negative_axis(w)) throw DomainError("lower_gamma: z on the branch cut");
    if (w == C(0)) {
        if (s > 0) return C(0);
        throw DomainError("lower_gamma: diverges at z = 0 for s < 0");
    }
    if (s < 0) return (lower_gamma(s + Real(1), w) + std::pow(w, s) * std::exp(-w)) / s;
    if (std::abs(w) <= Real(kEtaSeriesRadius) || std::abs(w) < s)
        return detail::checked(std::pow(w, s) * gamma_series_sums(s, w).s0, "lower_gamma");
    return detail::checked(C(gamma_fn(s)) - upper_gamma(s, w), "lower_gamma");
}

// ---------------------------------------------------------------------------
// η_a, Φ_a and ξ(a)
// ---------------------------------------------------------------------------

/// The three pieces of the incomplete-gamma decomposition of η_a (w = -iz, p = 1/a):
/// w1 = w^p Γ(1-p), w2 = p e^{-w}/w, w3 = -p(1+p) w^p Γ(-1-p, w).
template <class Real>
struct EtaDecomposition {
    Complex<Real> w1, w2, w3;
    Complex<Real> sum() const { return w1 + w2 + w3; }
};

template <class Real>
EtaDecomposition<Real> eta_a_decomposition(Real a, Complex<Real> z) {
    using C = Complex<Real>;
    if (!(a > 1)) throw DomainError("eta_a: requires a > 1");
    const C w = C(0, -1) * z;
    if (w == C(0) || detail::on_negative_axis(w))
        throw DomainError("eta_a decomposition: undefined on the positive imaginary z-axis");
    const Real p = 1 / a;
    const C wp = std::pow(w, p);
    return {wp * gamma_fn(1 - p), p * std::exp(-w) / w, -p * (1 + p) * wp * upper_gamma(-1 - p, w)};
}

/// η_a(z) by its power series e^{-w} + w Σ (-w)^k / (k! (k+s)), s = 1 - 1/a.
template <class Real>
Complex<Real> eta_a_series(Real a, Complex<Real> z) {
    using C = Complex<Real>;
    if (!(a > 1)) throw DomainError("eta_a: requires a > 1");
    const C w = C(0, -1) * z;
    return detail::checked(std::exp(-w) + w * gamma_series_sums(1 - 1 / a, w).s0, "eta_a_series");
}

/// η_a(z) through the incomplete-gamma decomposition (off the positive imaginary axis).
template <class Real>
Complex<Real> eta_a_incgamma(Real a, Complex<Real> z) {
    return detail::checked(eta_a_decomposition(a, z).sum(), "eta_a_incgamma");
}

template <class Real>
bool eta_uses_series(const Complex<Real>& z) {
    return std::abs(z) + z.imag() <= Real(kEtaSeriesRadius);
}

/// Entire function η_a(z) = e^{iz} - iz ∫₀¹ e^{izt} t^{-1/a} dt.
template <class Real>
Complex<Real> eta_a(Real a, Complex<Real> z) {
    return eta_uses_series(z) ? eta_a_series(a, z) : eta_a_incgamma(a, z);
}

/// dη_a/dz = (η_a(z) - e^{iz}) / (a z), with the removable point z = 0 handled by the series.
template <class Real>
Complex<Real> eta_a_dz(Real a, Complex<Real> z) {
    using C = Complex<Real>;
    if (!(a > 1)) throw DomainError("eta_a: requires a > 1");
    if (eta_uses_series(z)) {
        const C w = C(0, -1) * z;
        return detail::checked(C(0, -1) / a * gamma_series_sums(1 - 1 / a, w).s0, "eta_a_dz");
    }
    return detail::checked((eta_a_incgamma(a, z) - std::exp(C(0, 1) * z)) / (a * z), "eta_a_dz");
}

/// ∂η_a/∂a by the termwise-differentiated series -(w/a²) Σ (-w)^k / (k! (k+s)²).
template <class Real>
Complex<Real> eta_a_da_series(Real a, Complex<Real> z) {
    using C = Complex<Real>;
    if (!(a > 1)) throw DomainError("eta_a: requires a > 1");
    const C w = C(0, -1) * z;
    return detail::checked(-w / (a * a) * gamma_series_sums(1 - 1 / a, w).s1, "eta_a_da_series");
}

/// ∂η_a/∂a by differentiating the decomposition w1 + w2 + w3 in p = 1/a.
template <class Real>
Complex<Real> eta_a_da_incgamma(Real a, Complex<Real> z) {
    using C = Complex<Real>;
    if (!(a > 1)) throw DomainError("eta_a: requires a > 1");
    const C w = C(0, -1) * z;
    if (w == C(0) || detail::on_negative_axis(w))
        throw DomainError("eta_a decomposition: undefined on the positive imaginary z-axis");
    const Real p = 1 / a;
    const C logw = std::log(w);
    const C wp = std::pow(w, p);
    const Real g1 = gamma_fn(1 - p);
    const C g3 = upper_gamma(-1 - p, w);
    const C dg3 = upper_gamma_ds(-1 - p, w);  // ∂_s at s = -1-p; ∂_p = -∂_s
    const C dw1 = wp * g1 * (logw - digamma(1 - p));
    const C dw2 = std::exp(-w) / w;
    const C dw3 = -(1 + 2 * p) * wp * g3 - p * (1 + p) * wp * logw * g3 + p * (1 + p) * wp * dg3;
    return detail::checked(-(dw1 + dw2 + dw3) / (a * a), "eta_a_da_incgamma");
}

template <class Real>
Complex<Real> eta_a_da(Real a, Complex<Real> z) {
    return eta_uses_series(z) ? eta_a_da_series(a, z) : eta_a_da_incgamma(a, z);
}

/// Φ_a(z) = z^{-1/a} η_a(z) for Im z ≤ 0, z ≠ 0.
template <class Real>
Complex<Real> phi_a(Real a, Complex<Real> z) {
    if (z == Complex<Real>(0)) throw DomainError("phi_a: z = 0");
    if (z.imag() > 0) throw DomainError("phi_a: requires Im z <= 0");
    return std::pow(z, -1 / a) * eta_a(a, z);
}

/// ξ(a) = -e^{-πi/(2a)} Γ(-1/a) / a, the limit of Φ_a(y) as y → ∞.
template <class Real>
Complex<Real> xi(Real a) {
    if (!(a > 1)) throw DomainError("xi: requires a > 1");
    const Real pi = detail::pi_v<Real>;
    return -std::polar(Real(1), -pi / (2 * a)) * gamma_fn(-1 / a) / a;
}

/// dξ/da = ξ(a) [πi/(2a²) + ψ(-1/a)/a² - 1/a].
template <class Real>
Complex<Real> xi_da(Real a) {
    const Real pi = detail::pi_v<Real>;
    return xi(a) * Complex<Real>(digamma(-1 / a) / (a * a) - 1 / a, pi / (2 * a * a));
}

// ---------------------------------------------------------------------------
// Log-weighted primitives
// ---------------------------------------------------------------------------

/// t_k(y) = e^{-iy} ∫_y^∞ (log u)^k e^{iu} du (Abel sense), k ∈ {0,1,2}, for
/// complex y with Re y > 0 away from the origin; Gauss–Laguerre on the ray
/// v = -iy + τ: t_k = i ∫₀^∞ e^{-τ} (log v + iπ/2)^k dτ.
template <class Real>
Complex<Real> log_tail_scaled(int k, Complex<Real> y, int nodes = 64) {
    using C = Complex<Real>;
    const auto& rule = gauss_laguerre<Real>(nodes);
    const C shift(0, detail::pi_v<Real> / 2);
    C sum(0);
    for (int i = 0; i < nodes; ++i) {
        const C l = std::log(C(0, -1) * y + rule.nodes[i]) + shift;
        C v(1);
        for (int j = 0; j < k; ++j) v *= l;
        sum += rule.weights[i] * v;
    }
    return C(0, 1) * sum;
}

/// Abel-regularized C_k = ∫₀^∞ (log u)^k e^{iu} du: C_1 = -π/2 - iγ, C_2 = πγ + i(γ² - π²/12).
template <class Real>
Complex<Real> log_moment_constant(int k) {
    const Real pi = detail::pi_v<Real>, g = detail::euler_v<Real>;
    if (k == 1) return {-pi / 2, -g};
    if (k == 2) return {pi * g, g * g - pi * pi / 12};
    throw DomainError("log_moment_constant: k must be 1 or 2");
}

/// ∫₀^y (log u)^k e^{iu} du by the termwise-integrated power series (small y).
template <class Real>
Complex<Real> log_weighted_integral_series(int k, Real y) {
    using C = Complex<Real>;
    const Real l = std::log(y);
    C term(y, 0);  // i^n y^{n+1} / n!
    C sum(0);
    for (int n = 0; n < 10000; ++n) {
        const Real m = Real(n + 1);
        const Real factor = k == 1 ? (l / m - 1 / (m * m)) : (l * l / m - 2 * l / (m * m) + 2 / (m * m * m));
        const C c = term * factor;
        sum += c;
        if (n > y && std::abs(c) <= detail::eps_v<Real>() / 4 * std::abs(sum)) return sum;
        term *= C(0, y) / m;
    }
    throw ConvergenceError("log_weighted_integral series did not converge");
}

/// Crossover between the series and the complement C_k - e^{iy} t_k(y).
inline constexpr double kLogIntegralSplit = 4.0;

template <class Real>
Complex<Real> log_weighted_integral_t(int k, Real y) {
    using C = Complex<Real>;
    if (k != 1 && k != 2) throw DomainError("log_weighted_integral: k must be 1 or 2");
    if (!(y > 0)) throw DomainError("log_weighted_integral: y must be positive");
    if (y <= Real(kLogIntegralSplit)) return log_weighted_integral_series<Real>(k, y);
    return log_moment_constant<Real>(k) - std::exp(C(0, y)) * log_tail_scaled<Real>(k, C(y, 0));
}

// ---------------------------------------------------------------------------
// Fixed-signature (double) public surface
// ---------------------------------------------------------------------------

using cplx = std::complex<double>;

/// γ(s, z) for s ∈ (-1, ∞) \ {0} (any non-integer s < 0 also accepted), principal branch.
cplx lower_incomplete_gamma(double s, cplx z);
/// Γ(s, z) for real s (the contracts need s ≥ -2) and z off the cut.
cplx upper_incomplete_gamma(double s, cplx z);
/// Φ_a(z) for Im z ≤ 0, z ≠ 0.
cplx phi_a(double a, cplx z);
/// dΦ_a/dy = -(1/a) y^{-1-1/a} e^{iy}.
cplx phi_a_dy(double a, double y);
/// ∂Φ_a/∂a at real y > 0.
cplx phi_a_da(double a, double y);
/// ξ(a).
cplx xi(double a);
/// dξ/da.
cplx xi_da(double a);
/// Π(y) = ∫_y^∞ Γ(0, -iu) / u du.
cplx capital_pi(double y);
/// F_k(y) = Σ_{n≥1} (iy)^n / (n! n^k), k ∈ {1,2}, y ≤ 30 (OverflowError beyond).
cplx f_k_series(int k, double y);
/// F_k(y) from the closed forms in terms of log y, Γ(0,-iy) and Π(y) (any y > 0).
cplx f_k_closed(int k, double y);
/// Entire η_a(z).
cplx eta_a(double a, cplx z);
/// J_0 or J_1 at x ≥ 0.
double bessel_j(int order, double x);
/// ∫₀^y (log u)^k e^{iu} du, k ∈ {1,2}.
cplx log_weighted_integral(int k, double y);

}  // namespace zerofree
