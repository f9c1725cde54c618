#pragma once
// Gaussian quadrature rules and the contour-rotation helpers used for
// oscillatory tails. Nodes come from the Golub–Welsch eigenproblem (Eigen's
// SelfAdjointEigenSolver) and are then polished by Newton on the three-term
// recurrence, so they are accurate to working precision for any scalar type.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace zerofree {

/// Nodes and weights of an n-point Gaussian rule.
template <class Real>
struct GaussRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;
};

namespace detail {

// Legendre P_n and its derivative at x via the recurrence.
template <class Real>
void legendre_eval(int n, Real x, Real& p, Real& dp) {
    Real p0 = 1, p1 = x;
    if (n == 0) { p = 1; dp = 0; return; }
    for (int k = 2; k <= n; ++k) {
        Real pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1);
}

// Laguerre L_n and L_{n-1} at x via the recurrence.
template <class Real>
void laguerre_eval(int n, Real x, Real& ln, Real& lnm1) {
    Real l0 = 1, l1 = 1 - x;
    if (n == 0) { ln = 1; lnm1 = 0; return; }
    for (int k = 1; k < n; ++k) {
        Real lk = ((2 * k + 1 - x) * l1 - k * l0) / (k + 1);
        l0 = l1;
        l1 = lk;
    }
    ln = l1;
    lnm1 = l0;
}

template <class Real>
GaussRule<Real> build_gauss_legendre(int n) {
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    Mat jac = Mat::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        Real b = Real(k) / std::sqrt(Real(4) * k * k - 1);
        jac(k, k - 1) = b;
        jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(jac);
    GaussRule<Real> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        Real x = solver.eigenvalues()(i);
        Real p = 0, dp = 0;
        for (int it = 0; it < 4; ++it) {
            legendre_eval(n, x, p, dp);
            x -= p / dp;
        }
        legendre_eval(n, x, p, dp);
        rule.nodes[i] = x;
        rule.weights[i] = Real(2) / ((1 - x * x) * dp * dp);
    }
    return rule;
}

template <class Real>
GaussRule<Real> build_gauss_laguerre(int n) {
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    Mat jac = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        jac(k, k) = Real(2 * k + 1);
        if (k > 0) {
            jac(k, k - 1) = Real(k);
            jac(k - 1, k) = Real(k);
        }
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(jac);
    GaussRule<Real> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        Real x = solver.eigenvalues()(i);
        Real ln = 0, lnm1 = 0;
        for (int it = 0; it < 4; ++it) {
            laguerre_eval(n, x, ln, lnm1);
            Real dl = n * (ln - lnm1) / x;
            x -= ln / dl;
        }
        laguerre_eval(n, x, ln, lnm1);
        Real dl = n * (ln - lnm1) / x;
        rule.nodes[i] = x;
        rule.weights[i] = Real(1) / (x * dl * dl);
    }
    return rule;
}

template <class Real, class Builder>
const GaussRule<Real>& cached_rule(std::map<int, GaussRule<Real>>& cache, std::mutex& mu, int n,
                                   Builder build) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build(n)).first;
    return it->second;
}

}  // namespace detail

/// n-point Gauss–Legendre rule on [-1, 1] (cached, thread-safe).
template <class Real>
const GaussRule<Real>& gauss_legendre(int n) {
    static std::map<int, GaussRule<Real>> cache;
    static std::mutex mu;
    return detail::cached_rule<Real>(cache, mu, n, detail::build_gauss_legendre<Real>);
}

/// n-point Gauss–Laguerre rule for weight e^{-x} on [0, ∞) (cached, thread-safe).
template <class Real>
const GaussRule<Real>& gauss_laguerre(int n) {
    static std::map<int, GaussRule<Real>> cache;
    static std::mutex mu;
    return detail::cached_rule<Real>(cache, mu, n, detail::build_gauss_laguerre<Real>);
}

/// ∫_lo^hi f(x) dx with an n-point Gauss–Legendre rule; f may return real or complex.
template <class Real, class F>
auto gauss_legendre_integrate(F&& f, Real lo, Real hi, int n = 20) {
    const auto& rule = gauss_legendre<Real>(n);
    const Real half = (hi - lo) / 2, mid = (hi + lo) / 2;
    decltype(f(mid)) sum{};
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

/// ∫_Y^∞ e^{iωy} g(y) dy for g analytic in the quadrant swept by the rotation
/// and algebraically bounded there. The ray is turned to y = Y + i·sign(ω)·t,
/// where the exponential decays like e^{-|ω|t}; Gauss–Laguerre in |ω|t.
template <class Real, class G>
std::complex<Real> oscillatory_tail(G&& g, Real Y, Real omega, int n = 40) {
    using C = std::complex<Real>;
    const auto& rule = gauss_laguerre<Real>(n);
    const Real w = std::abs(omega);
    const C dir = omega > 0 ? C(0, 1) : C(0, -1);
    C sum{};
    for (int i = 0; i < n; ++i) {
        const Real t = rule.nodes[i] / w;
        sum += rule.weights[i] * C(g(C(Y, 0) + dir * t));
    }
    return std::exp(C(0, omega * Y)) * dir * sum / w;
}

/// ∫_Y^∞ g(y) dy for non-oscillatory g decaying like y^{-p} (p > 1, possibly
/// with logarithmic factors). Uses y = Y·e^{u/(p-1)} and Gauss–Laguerre in u.
template <class Real, class G>
auto algebraic_tail(G&& g, Real Y, Real p, int n = 40) {
    const auto& rule = gauss_laguerre<Real>(n);
    const Real rate = p - 1;
    decltype(g(Y)) sum{};
    for (int i = 0; i < n; ++i) {
        const Real u = rule.nodes[i];
        const Real y = Y * std::exp(u / rate);
        // Jacobian y/rate, divided by the Laguerre weight e^{-u}.
        sum += rule.weights[i] * g(y) * (y / rate) * std::exp(u);
    }
    return sum;
}

/// ∫_lo^hi f for f analytic inside but possibly singular (algebraically or
/// logarithmically) at the endpoints: tanh-sinh rule x = tanh(π/2·sinh t),
/// halving the step until two levels agree to `tol` (absolute) or
/// `max_level` is reached. Endpoints are never evaluated. Returns the value
/// and the last level difference.
template <class Real, class F>
std::pair<Real, Real> tanh_sinh_integrate(F&& f, Real lo, Real hi, Real tol, int max_level = 7) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    const Real half = (hi - lo) / 2;
    const Real half_pi = std::numbers::pi_v<Real> / 2;
    constexpr Real t_max = 3.5;  // weights beyond are below 1e-40
    // Both nodes ±t: distances 2/(1+e^{2u}) from the ends avoid cancellation.
    auto pair_sum = [&](Real t) {
        const Real u = half_pi * sinh(t);
        const Real w = half_pi * cosh(t) / (cosh(u) * cosh(u));
        const Real delta = half * 2 / (1 + exp(2 * u));
        if (!(delta > 0)) return Real(0);
        return w * (f(lo + delta) + f(hi - delta));
    };
    Real h = 1;
    Real sum = half_pi * f(lo + half);  // t = 0 (weight π/2)
    for (Real t = h; t <= t_max; t += h) sum += pair_sum(t);
    Real value = sum * h * half, change = std::abs(value);
    for (int level = 1; level <= max_level; ++level) {
        h /= 2;
        for (Real t = h; t <= t_max; t += 2 * h) sum += pair_sum(t);
        const Real next = sum * h * half;
        change = std::abs(next - value);
        value = next;
        if (level >= 3 && change <= tol) break;
    }
    return {value, change};
}

}  // namespace zerofree
