#include "zerofree/special_functions.hpp"

#include <cmath>

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;

// Π is evaluated on the ray -iy + R_{>0} beyond this point and by adding a
// real-axis integral below it.
constexpr double kPiRayStart = 8.0;

cplx pi_ray(double y) {
    // Π(y) = e^{iy} ∫₀^∞ e^{-τ} e1(t)/t dτ with t = -iy + τ and e1(t) = e^{t} Γ(0, t).
    const auto& rule = gauss_laguerre<double>(48);
    cplx sum(0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const cplx t(rule.nodes[i], -y);
        sum += rule.weights[i] * upper_gamma_scaled(0.0, t) / t;
    }
    return std::exp(cplx(0, y)) * sum;
}

cplx f_k_series_unchecked(int k, double y) {
    cplx term(1, 0), sum(0);
    for (int n = 1; n < 1000; ++n) {
        term *= cplx(0, y) / double(n);
        const cplx c = k == 1 ? term / double(n) : term / (double(n) * n);
        sum += c;
        if (n > y && std::abs(c) <= 1e-18 * std::abs(sum)) return sum;
    }
    throw ConvergenceError("f_k_series did not converge");
}

// Constant in F_2 = Π + C0 + (πi/2 - γ - log(y)/2) log y.
const cplx kF2Constant(kPi * kPi / 24 - kEuler * kEuler / 2, kPi * kEuler / 2);

}  // namespace

// The public double-precision entry points evaluate in extended precision:
// the series path cancels up to a factor e^{|z|} for z near the imaginary
// axis, which binary64 cannot absorb at 10⁻¹² relative accuracy.
cplx lower_incomplete_gamma(double s, cplx z) {
    const auto r = lower_gamma<long double>(s, Complex<long double>(z.real(), z.imag()));
    return {double(r.real()), double(r.imag())};
}

cplx upper_incomplete_gamma(double s, cplx z) {
    if (z == cplx(0) && s <= 0) throw DomainError("upper_incomplete_gamma: z = 0 requires s > 0");
    const auto r = upper_gamma<long double>(s, Complex<long double>(z.real(), z.imag()));
    return {double(r.real()), double(r.imag())};
}

cplx phi_a(double a, cplx z) { return phi_a<double>(a, z); }

cplx phi_a_dy(double a, double y) {
    if (!(y > 0)) throw DomainError("phi_a_dy: y must be positive");
    if (!(a > 1)) throw DomainError("phi_a_dy: requires a > 1");
    return -std::pow(y, -1 - 1 / a) / a * std::exp(cplx(0, y));
}

cplx phi_a_da(double a, double y) {
    if (!(y > 0)) throw DomainError("phi_a_da: y must be positive");
    const cplx z(y, 0);
    const double ypow = std::pow(y, -1 / a);
    return ypow * (std::log(y) / (a * a) * eta_a<double>(a, z) + eta_a_da<double>(a, z));
}

cplx xi(double a) { return xi<double>(a); }

cplx xi_da(double a) { return xi_da<double>(a); }

cplx capital_pi(double y) {
    if (!(y > 0)) throw DomainError("capital_pi: y must be positive");
    if (y >= kPiRayStart) return pi_ray(y);
    // Π(y) = Π(8) + ∫_y^8 Γ(0,-iu)/u du, panels of unit length (graded towards 0).
    cplx sum = pi_ray(kPiRayStart);
    const auto integrand = [](double u) { return upper_gamma<double>(0.0, cplx(0, -u)) / u; };
    double hi = kPiRayStart;
    while (hi > y) {
        double lo = std::max(y, hi > 1 ? hi - 1 : hi / 2);
        sum += gauss_legendre_integrate(integrand, lo, hi, 24);
        hi = lo;
    }
    return sum;
}

cplx f_k_series(int k, double y) {
    if (k != 1 && k != 2) throw DomainError("f_k_series: k must be 1 or 2");
    if (!(y > 0)) throw DomainError("f_k_series: y must be positive");
    if (y > 30) throw OverflowError("f_k_series: y > 30 is outside the series-safe range; use f_k_closed");
    return f_k_series_unchecked(k, y);
}

cplx f_k_closed(int k, double y) {
    if (!(y > 0)) throw DomainError("f_k_closed: y must be positive");
    const double l = std::log(y);
    if (k == 1) return cplx(-kEuler - l, kPi / 2) - upper_gamma<double>(0.0, cplx(0, -y));
    if (k == 2) return capital_pi(y) + kF2Constant + cplx(-kEuler - l / 2, kPi / 2) * l;
    throw DomainError("f_k_closed: k must be 1 or 2");
}

cplx eta_a(double a, cplx z) { return eta_a<double>(a, z); }

double bessel_j(int order, double x) {
    if (!(x >= 0)) throw DomainError("bessel_j: x must be nonnegative");
    // glibc's POSIX j0/j1 (accurate to a few ulp and fast).
    if (order == 0) return ::j0(x);
    if (order == 1) return ::j1(x);
    throw DomainError("bessel_j: order must be 0 or 1");
}

cplx log_weighted_integral(int k, double y) { return log_weighted_integral_t<double>(k, y); }

}  // namespace zerofree
