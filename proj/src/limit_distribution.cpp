#include "zerofree/limit_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr int kPanelNodes = 24;
constexpr int kTailNodes = 40;
const cplx I(0, 1);

// Counts integrand evaluations against the QuadratureSpec budget.
struct EvalBudget {
    long used = 0;
    long max;
    explicit EvalBudget(long m) : max(m) {}
    void charge(long n) {
        used += n;
        if (used > max) throw ConvergenceError("quadrature exceeded max_evals");
    }
};

// Panel breakpoints on [0, N·π]: geometric grading from `scale`/8 up to π
// (resolving the small-y transition of η_a), then one panel per half-period.
std::vector<double> head_breakpoints(double scale, int half_periods) {
    std::vector<double> b{0.0};
    double x = std::min(scale, 1.0) / 8;
    while (x < kPi / 2) {
        b.push_back(x);
        x *= 2;
    }
    for (int k = 1; k <= half_periods; ++k) b.push_back(k * kPi);
    return b;
}

// Integrates Im f over consecutive panels; returns per-panel contributions.
template <class F>
std::vector<double> panel_integrals(F&& f, const std::vector<double>& breaks, EvalBudget& budget) {
    std::vector<double> out;
    out.reserve(breaks.size());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        budget.charge(kPanelNodes);
        out.push_back(gauss_legendre_integrate([&](double y) { return std::imag(f(y)); }, breaks[i],
                                               breaks[i + 1], kPanelNodes));
    }
    return out;
}

// Head (sum of panels up to breakpoint index) plus tail at that breakpoint,
// evaluated for the last and the second-to-last full period; the difference is
// the a-posteriori error estimate.
template <class Tail>
QuadratureResult combine_head_tail(const std::vector<double>& panels, const std::vector<double>& breaks,
                                   Tail&& tail_im) {
    const std::size_t n = panels.size();
    double head = 0;
    for (std::size_t i = 0; i + 2 < n; ++i) head += panels[i];
    const double early = head + tail_im(breaks[n - 2]);
    head += panels[n - 2] + panels[n - 1];
    const double late = head + tail_im(breaks[n]);
    return {late, std::abs(late - early)};
}

// ε(y) and ε_a(y) in Φ_a(y) = ξ + e^{iy} ε(y) (complex y, Re y > 0).
struct Epsilon {
    cplx eps, eps_a;
};

Epsilon epsilon_parts(double a, cplx y, bool with_derivative) {
    const double p = 1 / a;
    const cplx w = -I * y;
    const cplx rot = std::polar(1.0, -kPi * p / 2);
    const cplx S = upper_gamma_scaled(-p, w);
    Epsilon e{p * rot * S, cplx(0)};
    if (with_derivative) {
        const cplx dS = upper_gamma_ds_scaled(-p, w);
        e.eps_a = -1 / (a * a) * rot * (cplx(1, -kPi * p / 2) * S - p * dS);
    }
    return e;
}

cplx ipow(cplx z, int m) {
    cplx r(1);
    for (int k = 0; k < m; ++k) r *= z;
    return r;
}

// Coefficient of e^{i(m-1)y} in the CDF integrand e^{-iy}/(y η_a(y)):
// y^{-1-1/a} (-ε)^m / ξ^{m+1}.
cplx cdf_component(double a, int m, cplx y, const cplx& xi_a) {
    const cplx pre = std::pow(y, -1 - 1 / a);
    if (m == 0) return pre / xi_a;
    return pre * ipow(-epsilon_parts(a, y, false).eps, m) / ipow(xi_a, m + 1);
}

// Coefficient of e^{i(m-1)y} in the density integrand e^{-iy} ∂_aη/(y η²),
// from ∂_aη/η² = y^{-1/a}[-(log y/a²)/H + (ξ' + e^{iy}ε_a)/H²], H = ξ + e^{iy}ε.
cplx density_component(double a, int m, cplx y, const cplx& xi_a, const cplx& xi_da_a) {
    const cplx pre = std::pow(y, -1 - 1 / a);
    const cplx l = std::log(y);
    Epsilon e{cplx(0), cplx(0)};
    if (m > 0) e = epsilon_parts(a, y, true);
    const cplx em = ipow(-e.eps, m);
    cplx val = -(l / (a * a)) * em / ipow(xi_a, m + 1) + xi_da_a * double(m + 1) * em / ipow(xi_a, m + 2);
    if (m >= 1) val += e.eps_a * double(m) * ipow(-e.eps, m - 1) / ipow(xi_a, m + 1);
    return pre * val;
}

template <class Component>
cplx frequency_tail(Component&& comp, int depth, double Y, EvalBudget& budget) {
    cplx sum(0);
    for (int m = 0; m <= depth; ++m) {
        budget.charge(kTailNodes);
        const double omega = m - 1;
        if (omega == 0)
            sum += algebraic_tail([&](double y) { return comp(m, cplx(y, 0)); }, Y, 2.0, kTailNodes);
        else
            sum += oscillatory_tail([&](cplx y) { return comp(m, y); }, Y, omega, kTailNodes);
    }
    return sum;
}

void check_c(double c) {
    if (!(c > 0.5) || !std::isfinite(c)) throw DomainError("c must exceed 1/2");
}

QuadratureResult retry_until(const QuadratureSpec& spec, const std::function<QuadratureResult(int)>& run) {
    int segments = spec.period_segments;
    QuadratureResult r = run(segments);
    for (int attempt = 0; attempt < 3; ++attempt) {
        if (r.err_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value))) return r;
        segments *= 2;
        r = run(segments);
    }
    if (r.err_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value))) return r;
    throw ConvergenceError("oscillatory quadrature did not reach the requested tolerance (estimate " +
                           std::to_string(r.err_estimate) + ")");
}

// ---- conditional law ------------------------------------------------------

struct CharSamples {
    std::vector<double> t, w;
    std::vector<cplx> phi;
};

CharSamples sample_char_function(double a, double delta, double x_extent) {
    const double mean = std::pow(delta, 1 - a) / (a - 1);
    double T = 8;
    while (std::abs(conditional_char_function(a, delta, T)) > 1e-17 && T < 1e7) T *= 1.5;
    const double h = kPi / (2 * (x_extent + mean + 1));
    const int panels = static_cast<int>(std::ceil(T / h));
    const auto& rule = gauss_legendre<double>(16);
    CharSamples s;
    s.t.reserve(panels * 16);
    for (int k = 0; k < panels; ++k) {
        const double lo = k * h, mid = lo + h / 2;
        for (int i = 0; i < 16; ++i) {
            const double t = mid + h / 2 * rule.nodes[i];
            s.t.push_back(t);
            s.w.push_back(h / 2 * rule.weights[i]);
            s.phi.push_back(conditional_char_function(a, delta, t));
        }
    }
    return s;
}

std::once_flag k_once;
double k1_cache = 0, k2_cache = 0;

void fill_constants() {
    std::call_once(k_once, [] {
        k1_cache = constant_k1().value;
        k2_cache = constant_k2().value;
    });
}

// ---- K1 / K2 pieces -------------------------------------------------------

using ld = long double;
using cld = std::complex<long double>;

// H2(y) and H1(y) directly from the log-weighted integrals (real y > 0).
void h_functions(ld y, cld& h1, cld& h2) {
    const cld i(0, 1);
    const ld l = std::log(y);
    const cld q = std::exp(i * y);
    const cld L1 = log_weighted_integral_t<ld>(1, y);
    const cld L2 = log_weighted_integral_t<ld>(2, y);
    h1 = ld(2) * (i * L1 - i * q / y + (ld(1) - q) * l - ld(1));
    const cld X = L1 + i - i / ld(2) * l - q / y + i * q * l;
    h2 = ld(3) * (i / ld(2) * L2 - X * X - i * q * l / y - l + (ld(0.25) - q / ld(2)) * l * l);
}

constexpr double kK1Start = 1e-3;

std::vector<double> k1_breakpoints(int half_periods) {
    std::vector<double> b;
    for (double x = kK1Start; x < 1; x *= 2) b.push_back(x);
    b.push_back(1.0);
    for (int k = 1; k <= half_periods; ++k) b.push_back(k * kPi);
    return b;
}

// Tail pieces of H̃_k = -i y^{-2} (q^{-1} h0 + h1 + q h2) at complex y.
struct HTail {
    cld h0, h1, h2;
};

HTail h2_tail_parts(cld y) {
    const cld i(0, 1);
    const cld l = std::log(y);
    const cld C1 = log_moment_constant<ld>(1), C2 = log_moment_constant<ld>(2);
    const cld t1 = log_tail_scaled<ld>(1, y), t2 = log_tail_scaled<ld>(2, y);
    const cld x0 = C1 + i - i / ld(2) * l;
    const cld x1 = -t1 - ld(1) / y + i * l;
    return {ld(3) * (i / ld(2) * C2 - x0 * x0 - l + l * l / ld(4)),
            ld(3) * (-i / ld(2) * t2 - ld(2) * x0 * x1 - i * l / y - l * l / ld(2)), -ld(3) * x1 * x1};
}

HTail h1_tail_parts(cld y) {
    const cld i(0, 1);
    const cld l = std::log(y);
    const cld C1 = log_moment_constant<ld>(1);
    const cld t1 = log_tail_scaled<ld>(1, y);
    return {ld(2) * (i * C1 + l - ld(1)), ld(2) * (-i * t1 - i / y - l), cld(0)};
}

// ∫_Y^∞ Im H̃(y) dy from the frequency pieces.
template <class Parts>
double h_tilde_tail(Parts&& parts, double Y) {
    const cplx mi(0, -1);
    auto piece = [&](int k, cplx y) {
        const HTail h = parts(cld(y.real(), y.imag()));
        const cld v = k == 0 ? h.h0 : (k == 1 ? h.h1 : h.h2);
        return mi * cplx(double(v.real()), double(v.imag())) / (y * y);
    };
    cplx s = oscillatory_tail([&](cplx y) { return piece(0, y); }, Y, -1.0, kTailNodes);
    s += algebraic_tail([&](double y) { return piece(1, cplx(y, 0)); }, Y, 3.0, kTailNodes);
    s += oscillatory_tail([&](cplx y) { return piece(2, y); }, Y, 1.0, kTailNodes);
    return s.imag();
}

// F1 and F2 at real y (series for y ≤ 8, closed forms beyond).
void f_pair(double y, cplx& f1, cplx& f2) {
    if (y <= 8) {
        f1 = f_k_series(1, y);
        f2 = f_k_series(2, y);
        return;
    }
    f1 = f_k_closed(1, y);
    f2 = f_k_closed(2, y);
}

cplx k2_integrand(double y) {
    cplx f1, f2;
    f_pair(y, f1, f2);
    return (f1 * f1 + f2) / y * std::exp(-I * y);
}

// e^{-iy} Π(y) for real y (ray quadrature, no oscillation).
cplx pi_scaled(double y) { return std::exp(-I * y) * capital_pi(y); }

const cplx kF2Constant(kPi * kPi / 24 - kEuler * kEuler / 2, kPi * kEuler / 2);

cplx k2_tail(double Y, bool companion) {
    const cplx B0(-kEuler, kPi / 2);
    auto e_of = [](cplx y) { return upper_gamma_scaled(0.0, -I * y); };
    cplx s(0);
    s += oscillatory_tail(
        [&](cplx y) {
            const cplx l = std::log(y), B = B0 - l;
            if (companion) return B / y;
            return (B * B + kF2Constant + (B0 - l / 2.0) * l) / y;
        },
        Y, -1.0, kTailNodes);
    s += algebraic_tail(
        [&](double y) {
            const cplx B = B0 - std::log(y);
            if (companion) return cplx(-e_of(y) / y);
            return (-2.0 * B * e_of(y) + pi_scaled(y)) / y;
        },
        Y, 2.0, kTailNodes);
    if (!companion)
        s += oscillatory_tail(
            [&](cplx y) {
                const cplx e = e_of(y);
                return e * e / y;
            },
            Y, 1.0, kTailNodes);
    return s;
}

}  // namespace

std::string to_string(CurveMethod m) {
    switch (m) {
        case CurveMethod::quadrature: return "quadrature";
        case CurveMethod::residue: return "residue";
        case CurveMethod::montecarlo: return "montecarlo";
        case CurveMethod::asymptotic: return "asymptotic";
    }
    return "unknown";
}

void CurveTable::validate() const {
    if (abscissae.size() != values.size() || abscissae.size() != err_estimates.size())
        throw DomainError("CurveTable: column lengths differ");
    for (std::size_t i = 1; i < abscissae.size(); ++i)
        if (!(abscissae[i] > abscissae[i - 1])) throw DomainError("CurveTable: abscissae not strictly increasing");
    for (double e : err_estimates)
        if (!std::isfinite(e) || e < 0) throw DomainError("CurveTable: invalid error estimate");
    if (method == CurveMethod::montecarlo && !seed) throw DomainError("CurveTable: Monte Carlo curve without seed");
}

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw DomainError("QuadratureSpec: tolerances must be positive");
    if (period_segments < 4 || acceleration_depth < 1 || max_evals < 1)
        throw DomainError("QuadratureSpec: depths must be >= 1 and period_segments >= 4");
}

QuadratureResult cdf_with_error(double c, const QuadratureSpec& spec) {
    check_c(c);
    spec.validate();
    if (c <= 0.5 + 1e-4) {
        // Edge regime: integrate the near-half density 2 - K1 t².
        const double t = c - 0.5;
        return {2 * t - stored_k1() * t * t * t / 3, std::pow(t, 4)};
    }
    const double a = 2 * c;
    const cplx xi_a = xi(a);
    EvalBudget budget(spec.max_evals);
    auto run = [&](int segments) {
        const auto breaks = head_breakpoints(1 - 1 / a, segments);
        const auto integrand = [&](double y) { return std::exp(-I * y) / (y * eta_a<double>(a, cplx(y, 0))); };
        const auto panels = panel_integrals(integrand, breaks, budget);
        auto tail = [&](double Y) {
            return frequency_tail([&](int m, cplx y) { return cdf_component(a, m, y, xi_a); },
                                  spec.acceleration_depth, Y, budget)
                .imag();
        };
        QuadratureResult r = combine_head_tail(panels, breaks, tail);
        // Prob(σ > c) = 1/2 + I/π, so cdf = 1/2 - I/π.
        return QuadratureResult{0.5 - r.value / kPi, r.err_estimate / kPi};
    };
    return retry_until(spec, run);
}

double cdf(double c, const QuadratureSpec& spec) { return cdf_with_error(c, spec).value; }

QuadratureResult density_with_error(double c, const QuadratureSpec& spec) {
    check_c(c);
    spec.validate();
    const double a = 2 * c;
    const cplx xi_a = xi(a), xi_da_a = xi_da(a);
    EvalBudget budget(spec.max_evals);
    auto run = [&](int segments) {
        const auto breaks = head_breakpoints(1 - 1 / a, segments);
        const auto integrand = [&](double y) {
            const cplx z(y, 0);
            const cplx e = eta_a<double>(a, z);
            return std::exp(-I * y) * eta_a_da<double>(a, z) / (y * e * e);
        };
        const auto panels = panel_integrals(integrand, breaks, budget);
        auto tail = [&](double Y) {
            return frequency_tail([&](int m, cplx y) { return density_component(a, m, y, xi_a, xi_da_a); },
                                  spec.acceleration_depth, Y, budget)
                .imag();
        };
        QuadratureResult r = combine_head_tail(panels, breaks, tail);
        return QuadratureResult{2 / kPi * r.value, 2 / kPi * r.err_estimate};
    };
    return retry_until(spec, run);
}

double density(double c, const QuadratureSpec& spec) { return density_with_error(c, spec).value; }

CurveTable cdf_curve(const std::vector<double>& cs, const QuadratureSpec& spec) {
    CurveTable t;
    t.method = CurveMethod::quadrature;
    for (double c : cs) {
        const auto r = cdf_with_error(c, spec);
        t.abscissae.push_back(c);
        t.values.push_back(r.value);
        t.err_estimates.push_back(r.err_estimate);
    }
    t.validate();
    return t;
}

CurveTable density_curve(const std::vector<double>& cs, const QuadratureSpec& spec) {
    CurveTable t;
    t.method = CurveMethod::quadrature;
    for (double c : cs) {
        const auto r = density_with_error(c, spec);
        t.abscissae.push_back(c);
        t.values.push_back(r.value);
        t.err_estimates.push_back(r.err_estimate);
    }
    t.validate();
    return t;
}

double density_asymptotic(double c, AsymptoticRegime regime) {
    if (regime == AsymptoticRegime::near_half) {
        if (!(c >= 0.5 && c < 0.6)) throw DomainError("density_asymptotic(near_half) requires 1/2 <= c < 0.6");
        const double t = c - 0.5;
        return 2 - stored_k1() * t * t;
    }
    if (!(c > 3)) throw DomainError("density_asymptotic(large_c) requires c > 3");
    return stored_k2() / (c * c * c);
}

double stored_k1() {
    fill_constants();
    return k1_cache;
}

double stored_k2() {
    fill_constants();
    return k2_cache;
}

QuadratureResult constant_k2(const QuadratureSpec& spec) {
    spec.validate();
    EvalBudget budget(spec.max_evals);
    auto run = [&](int segments) {
        const auto breaks = head_breakpoints(1.0, segments);
        const auto panels = panel_integrals(k2_integrand, breaks, budget);
        QuadratureResult r = combine_head_tail(panels, breaks, [](double Y) { return k2_tail(Y, false).imag(); });
        return QuadratureResult{r.value / (2 * kPi), r.err_estimate / (2 * kPi)};
    };
    return retry_until(spec, run);
}

QuadratureResult k2_companion(const QuadratureSpec& spec) {
    spec.validate();
    EvalBudget budget(spec.max_evals);
    const auto breaks = head_breakpoints(1.0, spec.period_segments);
    const auto integrand = [](double y) {
        cplx f1, f2;
        f_pair(y, f1, f2);
        return f1 / y * std::exp(-I * y);
    };
    const auto panels = panel_integrals(integrand, breaks, budget);
    return combine_head_tail(panels, breaks, [](double Y) { return k2_tail(Y, true).imag(); });
}

std::vector<double> k2_half_period_contributions(int count) {
    std::vector<double> out;
    for (int k = 0; k < count; ++k)
        out.push_back(gauss_legendre_integrate([](double y) { return std::imag(k2_integrand(y)); }, k * kPi,
                                               (k + 1) * kPi, kPanelNodes));
    return out;
}

double k1_integrand(double y) {
    // Below kK1Start the closed form cancels 3/y⁴ against the h-term beyond
    // extended precision; the integrand is 17/6 + O(y²) there (|O(y²)| < 3·10⁻⁷).
    if (y < kK1Start) return 17.0 / 6.0;
    cld h1, h2;
    h_functions(ld(y), h1, h2);
    const ld yl = y;
    const cld ht = cld(0, -1) * std::exp(cld(0, -yl)) * h2 / (yl * yl);
    return double(3 / (yl * yl * yl * yl) + ld(1.5) / (yl * yl) - ht.imag());
}

QuadratureResult constant_k1(const QuadratureSpec& spec) {
    spec.validate();
    EvalBudget budget(spec.max_evals);
    auto run = [&](int segments) {
        const auto breaks = k1_breakpoints(segments);
        std::vector<double> panels;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            budget.charge(kPanelNodes);
            panels.push_back(gauss_legendre_integrate(k1_integrand, breaks[i], breaks[i + 1], kPanelNodes));
        }
        // [0, 1e-3]: the integrand is 17/6 + O(y²) there.
        panels.front() += 17.0 / 6.0 * kK1Start;
        auto tail = [](double Y) { return 1 / (Y * Y * Y) + 1.5 / Y - h_tilde_tail(h2_tail_parts, Y); };
        QuadratureResult r = combine_head_tail(panels, breaks, tail);
        return QuadratureResult{20 + 8 / kPi * r.value, 8 / kPi * r.err_estimate};
    };
    return retry_until(spec, run);
}

QuadratureResult k1_companion(const QuadratureSpec& spec) {
    spec.validate();
    const auto breaks = k1_breakpoints(spec.period_segments);
    std::vector<double> panels;
    const auto integrand = [](double y) {
        cld h1, h2;
        h_functions(ld(y), h1, h2);
        const ld yl = y;
        const cld ht = cld(0, -1) * std::exp(cld(0, -yl)) * h1 / (yl * yl);
        return double(ht.imag() - 2 / (yl * yl));
    };
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        panels.push_back(gauss_legendre_integrate(integrand, breaks[i], breaks[i + 1], kPanelNodes));
    panels.front() += 0.5 * kK1Start;  // integrand → 1/2 at the origin
    auto tail = [](double Y) { return h_tilde_tail(h1_tail_parts, Y) - 2 / Y; };
    return combine_head_tail(panels, breaks, tail);
}

cplx untaken_imaginary_partial_integral(double c, double y0) {
    check_c(c);
    if (!(y0 > 0 && y0 < 1)) throw DomainError("lower limit must lie in (0, 1)");
    const double a = 2 * c;
    const auto integrand = [&](double y) { return std::exp(-I * y) / (y * eta_a<double>(a, cplx(y, 0))); };
    // Geometric panels resolve the 1/y behaviour uniformly in log y.
    cplx sum(0);
    double lo = y0;
    while (lo < 1) {
        const double hi = std::min(1.0, lo * 2);
        sum += gauss_legendre_integrate(integrand, lo, hi, kPanelNodes);
        lo = hi;
    }
    return sum;
}

cplx conditional_char_function(double a, double delta, double t) {
    if (!(a > 1)) throw DomainError("conditional_char_function: requires a > 1");
    if (!(delta > 0)) throw DomainError("conditional_char_function: requires delta > 0");
    if (t == 0) return 1;
    if (t < 0) return std::conj(conditional_char_function(a, delta, -t));
    const double p = 1 / a;
    const cplx mit(0, -t);
    const cplx mitp = std::pow(mit, p);
    const cplx expo = delta - mitp * gamma_fn(1 - p) - p * mitp * upper_gamma(-p, mit * std::pow(delta, -a));
    return std::exp(expo);
}

std::vector<double> conditional_density_grid(double a, double delta, const std::vector<double>& xs) {
    double extent = 1;
    for (double x : xs) extent = std::max(extent, std::abs(x));
    const CharSamples s = sample_char_function(a, delta, extent);
    std::vector<double> out;
    for (double x : xs) {
        double sum = 0;
        for (std::size_t i = 0; i < s.t.size(); ++i) sum += s.w[i] * std::real(s.phi[i] * std::polar(1.0, -s.t[i] * x));
        out.push_back(sum / kPi);
    }
    return out;
}

std::vector<double> conditional_cdf_grid(double a, double delta, const std::vector<double>& xs) {
    double extent = 1;
    for (double x : xs) extent = std::max(extent, std::abs(x));
    const CharSamples s = sample_char_function(a, delta, extent);
    std::vector<double> out;
    for (double x : xs) {
        double sum = 0;
        for (std::size_t i = 0; i < s.t.size(); ++i)
            sum += s.w[i] * std::imag(s.phi[i] * std::polar(1.0, -s.t[i] * x)) / s.t[i];
        out.push_back(0.5 - sum / kPi);
    }
    return out;
}

double conditional_density(double a, double delta, double x, const QuadratureSpec& spec) {
    spec.validate();
    return conditional_density_grid(a, delta, {x}).front();
}

}  // namespace zerofree
