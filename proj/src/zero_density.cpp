#include "zerofree/zero_density.hpp"

#include "zerofree/quadrature.hpp"
#include "zerofree/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
// A 12-point rule over one full period of e^{iωr} is exact to ~1e-20 relative.
constexpr int kPanelNodes = 12;
// c_min·R at the split between direct quadrature and the Hankel expansion.
constexpr double kSplitArgument = 30;

// Hankel coefficients a_k(α) = Π_{i=1..k} (4α² - (2i-1)²) / (k! 8^k).
std::vector<double> hankel_coefficients(int alpha, int order) {
    std::vector<double> a(order + 1);
    a[0] = 1;
    const double mu = 4.0 * alpha * alpha;
    for (int k = 1; k <= order; ++k) {
        const double odd = 2.0 * k - 1;
        a[k] = a[k - 1] * (mu - odd * odd) / (8.0 * k);
    }
    return a;
}

// ∫_R^∞ r^{-p} e^{iωr} dr = (i/ω)^{1-p} Γ(1-p, -iωR)   (p > 1).
cplx oscillatory_power_tail(double p, double omega, double radius) {
    if (std::abs(omega) * radius < 1e-9) return cplx(std::pow(radius, 1 - p) / (p - 1), 0);
    const cplx w(0, -omega * radius);
    const cplx scaled = upper_gamma_scaled<double>(1 - p, w);  // e^{w} Γ(1-p, w)
    const cplx log_prefactor(-std::log(std::abs(omega)), omega > 0 ? kPi / 2 : -kPi / 2);
    return std::exp((1 - p) * log_prefactor - w) * scaled;
}

double bessel(int alpha, double x) { return alpha == 0 ? ::j0(x) : ::j1(x); }

}  // namespace

std::string to_string(ExponentSource s) {
    switch (s) {
        case ExponentSource::lattice: return "lattice";
        case ExponentSource::poisson: return "poisson";
        case ExponentSource::synthetic: return "synthetic";
    }
    return "unknown";
}

void ExponentSequence::validate() const {
    if (lambdas.empty()) throw DomainError("exponent sequence is empty");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!std::isfinite(lambdas[i])) throw DomainError("exponents must be finite");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw DomainError("exponents must increase strictly");
    }
}

ExponentSequence log_integer_exponents(int k) {
    if (k < 1) throw DomainError("need at least one exponent");
    ExponentSequence e;
    e.source = ExponentSource::synthetic;
    for (int j = 1; j <= k; ++j) e.lambdas.push_back(2 * std::log(double(j)));
    return e;
}

ExponentSequence exponents_from_points(const std::vector<double>& points, int k) {
    if (k < 1 || int(points.size()) < k) throw DomainError("fewer points than requested exponents");
    ExponentSequence e;
    e.source = ExponentSource::poisson;
    for (int j = 0; j < k; ++j) {
        if (!(points[j] > 0)) throw DomainError("points must be positive");
        e.lambdas.push_back(2 * std::log(points[j]));
    }
    e.validate();
    return e;
}

ExponentSequence lattice_exponents(const ShellSpectrum& spectrum, int k) {
    spectrum.validate();
    if (k < 1 || int(spectrum.shells.size()) < k)
        throw DegenerateSpectrumError("spectrum has fewer than " + std::to_string(k) + " shells");
    ExponentSequence e;
    e.source = ExponentSource::lattice;
    for (int j = 0; j < k; ++j) {
        if (spectrum.shells[j].primitive_pair_count != 1)
            throw DegenerateSpectrumError("shell " + std::to_string(j + 1) + " holds " +
                                          std::to_string(spectrum.shells[j].primitive_pair_count) +
                                          " primitive pairs (repeated exponent)");
        e.lambdas.push_back(2 * std::log(spectrum.shells[j].length));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Bessel products

BesselIntegral bessel_product_integral(const std::vector<double>& c, const std::vector<int>& j1_positions,
                                       const QuadratureSpec& spec) {
    spec.validate();
    const int k = int(c.size());
    if (k < 5) throw ConvergenceError("Bessel product integrals need K >= 5 factors (K = " + std::to_string(k) + ")");
    for (double v : c)
        if (!(v > 0) || !std::isfinite(v)) throw DomainError("Bessel product coefficients must be positive");
    if (!(j1_positions.empty() || j1_positions.size() == 2)) throw DomainError("J1 positions: none or two");
    std::vector<int> alpha(k, 0);
    for (int p : j1_positions) {
        if (p < 0 || p >= k) throw DomainError("J1 position out of range");
        alpha[p] = 1;
    }
    if (j1_positions.size() == 2 && j1_positions[0] == j1_positions[1]) throw DomainError("J1 positions must differ");

    const double c_min = *std::min_element(c.begin(), c.end());
    double c_sum = 0;
    for (double v : c) c_sum += v;
    const double radius = kSplitArgument / c_min;

    BesselIntegral out;
    out.split_radius = radius;

    // Direct part: panels of one shortest period of the product.
    const auto& rule = gauss_legendre<double>(kPanelNodes);
    const double width = 2 * kPi / c_sum;
    const long panels = long(std::ceil(radius / width));
    if (panels * kPanelNodes * k > spec.max_evals * 50L)
        throw ConvergenceError("Bessel product: coefficient spread needs too many panels");
    const double h = radius / double(panels);
    double direct = 0, direct_abs = 0;
    for (long p = 0; p < panels; ++p) {
        const double lo = p * h, mid = lo + h / 2;
        double panel = 0;
        for (int i = 0; i < kPanelNodes; ++i) {
            const double r = mid + h / 2 * rule.nodes[i];
            double prod = r;
            for (int j = 0; j < k; ++j) prod *= bessel(alpha[j], c[j] * r);
            panel += rule.weights[i] * prod;
        }
        panel *= h / 2;
        direct += panel;
        direct_abs += std::abs(panel);
    }

    // Tail: J_α(x) = ½√(2/πx)[e^{iθ}S(x) + e^{-iθ}S̄(x)], θ = x - απ/2 - π/4,
    // S(x) = Σ_m i^m a_m(α) x^{-m}. The product expands into sign patterns ε
    // with frequency ω = Σ ε_j c_j; pattern -ε is the conjugate of ε.
    const int order = std::max(1, spec.acceleration_depth);
    double amplitude = 1;  // (1/2)^K Π √(2/(π c_j))
    for (double v : c) amplitude *= 0.5 * std::sqrt(2 / (kPi * v));
    const double p0 = k / 2.0 - 1;
    // Crude bound of the whole tail; skip the expansion when it cannot matter.
    const double tail_bound = std::ldexp(amplitude, k) * std::pow(radius, 1 - p0) / (p0 - 1) * 2;
    double tail = 0, tail_err = 0;
    if (tail_bound > 1e-3 * spec.abs_tol) {
        std::vector<std::vector<cplx>> series(k);  // coefficients of r^{-m}
        const auto a0 = hankel_coefficients(0, order), a1 = hankel_coefficients(1, order);
        for (int j = 0; j < k; ++j) {
            const auto& a = alpha[j] == 0 ? a0 : a1;
            series[j].resize(order + 1);
            cplx im_pow(1, 0);
            for (int m = 0; m <= order; ++m) {
                series[j][m] = im_pow * a[m] * std::pow(c[j], -m);
                im_pow *= cplx(0, 1);
            }
        }
        cplx total(0, 0), last(0, 0);
        std::vector<cplx> poly(order + 1), next(order + 1);
        const long patterns = 1L << (k - 1);
        for (long mask = 0; mask < patterns; ++mask) {
            // ε_0 = +1; bit j-1 of mask set means ε_j = -1.
            double omega = 0, phase = 0;
            std::fill(poly.begin(), poly.end(), cplx(0, 0));
            poly[0] = 1;
            for (int j = 0; j < k; ++j) {
                const int eps = (j > 0 && (mask >> (j - 1)) & 1) ? -1 : 1;
                omega += eps * c[j];
                phase -= eps * (alpha[j] * kPi / 2 + kPi / 4);
                std::fill(next.begin(), next.end(), cplx(0, 0));
                for (int m = 0; m <= order; ++m) {
                    if (poly[m] == cplx(0, 0)) continue;
                    for (int q = 0; m + q <= order; ++q)
                        next[m + q] += poly[m] * (eps > 0 ? series[j][q] : std::conj(series[j][q]));
                }
                poly.swap(next);
            }
            const cplx rot = std::polar(1.0, phase);
            for (int m = 0; m <= order; ++m) {
                const cplx term = rot * poly[m] * oscillatory_power_tail(p0 + m, omega, radius);
                total += term;
                if (m == order) last += term;
            }
        }
        tail = 2 * amplitude * total.real();
        tail_err = 2 * amplitude * std::abs(last);
        out.frequencies = int(2 * patterns);
    } else {
        tail_err = tail_bound;
    }

    out.value = direct + tail;
    out.err_estimate = tail_err + 64 * std::numeric_limits<double>::epsilon() * direct_abs;
    return out;
}

double bessel_identity_residual(const std::vector<double>& c, int a, const QuadratureSpec& spec) {
    const int k = int(c.size());
    if (a < 0 || a >= k) throw DomainError("identity index out of range");
    const double lhs = c[a] * bessel_product_integral(c, {}, spec).value;
    double rhs = 0;
    for (int b = 0; b < k; ++b)
        if (b != a) rhs += c[b] * bessel_product_integral(c, {a, b}, spec).value;
    return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// ν^(K)

QuadratureResult nu_k_with_error(const ExponentSequence& exponents, double sigma, const QuadratureSpec& spec,
                                 double sigma_guard) {
    exponents.validate();
    const int k = exponents.size();
    if (k < 5) throw ConvergenceError("nu_k needs K >= 5 exponents");
    if (!std::isfinite(sigma) || !(sigma > sigma_guard)) throw DomainError("sigma must lie above the abscissa guard");
    const auto& lam = exponents.lambdas;
    // Coefficients relative to the largest one; the common factor e^{-2λ_top σ}
    // cancels against the μ^{-2} scaling of the integrals.
    double top = -std::numeric_limits<double>::infinity();
    for (double l : lam) top = std::max(top, -l * sigma);
    std::vector<double> c(k);
    for (int j = 0; j < k; ++j) c[j] = std::exp(-lam[j] * sigma - top);

    double max_weight = 0;
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) max_weight = std::max(max_weight, c[a] * c[b]);

    const double diag = bessel_product_integral(c, {}, spec).value;
    const double diag_err = bessel_product_integral(c, {}, spec).err_estimate;
    double sum = 0, err = 0;
    for (int a = 0; a < k; ++a) {
        for (int b = a; b < k; ++b) {
            const double weight = lam[a] * lam[b] * c[a] * c[b];
            if (weight == 0 || c[a] * c[b] < 1e-16 * max_weight) continue;
            if (a == b) {
                sum += weight * diag;
                err += std::abs(weight) * diag_err;
            } else {
                const auto ib = bessel_product_integral(c, {a, b}, spec);
                sum -= 2 * weight * ib.value;
                err += 2 * std::abs(weight) * ib.err_estimate;
            }
        }
    }
    return {sum / (2 * kPi), err / (2 * kPi)};
}

double nu_k(const ExponentSequence& exponents, double sigma, const QuadratureSpec& spec) {
    return nu_k_with_error(exponents, sigma, spec).value;
}

CurveTable nu_curve(const ExponentSequence& exponents, const std::vector<double>& sigma_grid,
                    const QuadratureSpec& spec) {
    CurveTable t;
    t.method = CurveMethod::quadrature;
    for (double s : sigma_grid) {
        const auto r = nu_k_with_error(exponents, s, spec);
        t.abscissae.push_back(s);
        t.values.push_back(r.value);
        t.err_estimates.push_back(r.err_estimate);
    }
    t.validate();
    return t;
}

std::pair<double, double> zero_strip(const ExponentSequence& exponents) {
    exponents.validate();
    const auto& lam = exponents.lambdas;
    const int k = exponents.size();
    if (k < 2) throw DomainError("a single exponential has no zeros");
    // Root of a monotone function by bracket expansion and bisection.
    auto root = [](auto&& g, bool increasing) {
        double lo = -1, hi = 1;
        auto sign_ok = [&](double x, bool want_positive) { return (g(x) > 0) == want_positive; };
        while (!sign_ok(lo, !increasing)) lo *= 2;
        while (!sign_ok(hi, increasing)) hi *= 2;
        for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
            const double mid = 0.5 * (lo + hi);
            ((g(mid) > 0) == increasing ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    // σ_hi: e^{-λ₁σ} = Σ_{j≥2} e^{-λ_jσ}; beyond it the first term dominates.
    auto g_hi = [&](double s) {
        double t = 0;
        for (int j = 1; j < k; ++j) t += std::exp(-(lam[j] - lam[0]) * s);
        return 1 - t;
    };
    // σ_lo: below it the last term dominates.
    auto g_lo = [&](double s) {
        double t = 0;
        for (int j = 0; j < k - 1; ++j) t += std::exp((lam[k - 1] - lam[j]) * s);
        return 1 - t;
    };
    return {root(g_lo, false), root(g_hi, true)};
}

namespace {

// σ in (lo, hi) where some signed sum Σ ε_j e^{-λ_j σ} vanishes. The Bessel
// product integrals are not analytic in the c_j there, so ν^(K) has kinks.
std::vector<double> nu_kinks(const ExponentSequence& e, double lo, double hi) {
    const int k = e.size();
    std::vector<double> kinks;
    if (k > 14) return kinks;  // too many sign patterns; plain bisection copes
    constexpr int kScan = 256;
    auto signed_sum = [&](long mask, double s) {
        double v = 0;
        for (int j = 0; j < k; ++j) {
            const int eps = (j > 0 && (mask >> (j - 1)) & 1) ? -1 : 1;
            v += eps * std::exp(-e.lambdas[j] * s);
        }
        return v;
    };
    for (long mask = 1; mask < (1L << (k - 1)); ++mask) {
        double a = lo, fa = signed_sum(mask, a);
        for (int i = 1; i <= kScan; ++i) {
            const double b = lo + (hi - lo) * i / kScan, fb = signed_sum(mask, b);
            if ((fa < 0) != (fb < 0)) {
                double x = a, y = b, fx = fa;
                for (int it = 0; it < 60 && y - x > 1e-15 * (1 + std::abs(x)); ++it) {
                    const double m = 0.5 * (x + y), fm = signed_sum(mask, m);
                    if ((fm < 0) == (fx < 0)) x = m, fx = fm;
                    else y = m;
                }
                kinks.push_back(0.5 * (x + y));
            }
            a = b, fa = fb;
        }
    }
    std::sort(kinks.begin(), kinks.end());
    return kinks;
}

}  // namespace

QuadratureResult h_frequency(const ExponentSequence& exponents, double sigma1, double sigma2,
                             const QuadratureSpec& spec) {
    exponents.validate();
    if (!(sigma1 <= sigma2)) throw DomainError("h_frequency needs sigma1 <= sigma2");
    if (exponents.size() < 5) throw ConvergenceError("h_frequency needs K >= 5 exponents");
    const auto [lo_strip, hi_strip] = zero_strip(exponents);
    const double lo = std::max(sigma1, lo_strip), hi = std::min(sigma2, hi_strip);
    if (!(lo < hi)) return {0, 0};
    auto nu = [&](double s) { return nu_k(exponents, s, spec); };
    // Additivity is only asked to 1e-8; ν itself is good to ~1e-13.
    const double tol = std::max(spec.abs_tol * 100, 1e-9);
    // ν^(K) is analytic between kinks and behaves like a fractional power of
    // the distance to them, which tanh-sinh absorbs at the piece endpoints.
    std::vector<double> edges{lo};
    for (double x : nu_kinks(exponents, lo, hi))
        if (x - edges.back() > 1e-12 * (hi - lo) && hi - x > 1e-12 * (hi - lo)) edges.push_back(x);
    edges.push_back(hi);
    double value = 0, err_total = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double share = tol * (edges[i + 1] - edges[i]) / (hi - lo);
        const auto [v, err] = tanh_sinh_integrate<double>(nu, edges[i], edges[i + 1], share);
        value += v;
        err_total += err;
    }
    return {value, err_total};
}

CurveTable nu_for_lattice(const ShellSpectrum& spectrum, int k, const std::vector<double>& sigma_grid,
                          bool rescaled, const QuadratureSpec& spec) {
    const ExponentSequence e = lattice_exponents(spectrum, k);
    const double n = spectrum.dimension;
    CurveTable t;
    t.method = CurveMethod::quadrature;
    for (double s : sigma_grid) {
        const auto r = nu_k_with_error(e, rescaled ? n * s : s, spec);
        const double scale = rescaled ? n * n : 1.0;
        t.abscissae.push_back(s);
        t.values.push_back(scale * r.value);
        t.err_estimates.push_back(scale * r.err_estimate);
    }
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Argument principle

cplx dirichlet_polynomial(const ExponentSequence& exponents, cplx s) {
    cplx f(0, 0);
    for (double l : exponents.lambdas) f += std::exp(-l * s);
    return f;
}

namespace {

struct BoundaryZero {};

// Σ_j |e^{-λ_j s}|: scale against which |f| counts as vanishing.
double term_scale(const ExponentSequence& e, cplx s) {
    double t = 0;
    for (double l : e.lambdas) t += std::exp(-l * s.real());
    return t;
}

double winding_phase(const ExponentSequence& e, const std::vector<cplx>& corners, long& evaluations) {
    const double span = e.lambdas.back() - e.lambdas.front();
    double total = 0;
    auto eval = [&](cplx z) {
        ++evaluations;
        const cplx f = dirichlet_polynomial(e, z);
        if (std::abs(f) < 1e-10 * term_scale(e, z)) throw BoundaryZero{};
        return f;
    };
    // Bisect a step until the phase of f turns by less than π/2 across it.
    auto step = [&](auto&& self, cplx za, cplx fa, cplx zb, cplx fb, int depth) -> void {
        const double d = std::arg(fb / fa);
        if (std::abs(d) < kPi / 2) {
            total += d;
            return;
        }
        if (depth > 60) throw BoundaryZero{};
        const cplx zm = 0.5 * (za + zb);
        const cplx fm = eval(zm);
        self(self, za, fa, zm, fm, depth + 1);
        self(self, zm, fm, zb, fb, depth + 1);
    };
    for (std::size_t edge = 0; edge < corners.size(); ++edge) {
        const cplx za = corners[edge], zb = corners[(edge + 1) % corners.size()];
        const double length = std::abs(zb - za);
        // Initial spacing: relative phases of the terms turn by ≤ π/4 per step.
        const double h0 = span > 0 ? kPi / (4 * span) : length;
        const long steps = std::max(8L, long(std::ceil(length / std::min(h0, length / 8))));
        cplx z_prev = za, f_prev = eval(za);
        for (long i = 1; i <= steps; ++i) {
            const cplx z = za + (zb - za) * (double(i) / double(steps));
            const cplx f = eval(z);
            step(step, z_prev, f_prev, z, f, 0);
            z_prev = z;
            f_prev = f;
        }
    }
    return total;
}

}  // namespace

ZeroCountResult count_zeros_rectangle(const ExponentSequence& exponents, double sigma1, double sigma2,
                                      double tau1, double tau2) {
    exponents.validate();
    if (!(sigma1 < sigma2) || !(tau1 < tau2)) throw DomainError("rectangle needs sigma1 < sigma2 and tau1 < tau2");
    ZeroCountResult r;
    r.sigma1 = sigma1;
    r.sigma2 = sigma2;
    for (int attempt = 0; attempt <= 5; ++attempt) {
        // Deterministic jitter of the horizontal edges.
        const double t1 = tau1 + 1e-3 * attempt * 0.7548776662466927;
        const double t2 = tau2 - 1e-3 * attempt * 0.5698402909980532;
        try {
            long evaluations = 0;
            const std::vector<cplx> corners{{sigma1, t1}, {sigma2, t1}, {sigma2, t2}, {sigma1, t2}};
            const double phase = winding_phase(exponents, corners, evaluations);
            const double winding = phase / (2 * kPi);
            r.count = std::lround(winding);
            r.winding_residual = std::abs(winding - double(r.count));
            r.tau1 = t1;
            r.tau2 = t2;
            r.evaluations = evaluations;
            r.jitter_attempts = attempt;
            return r;
        } catch (const BoundaryZero&) {
            continue;
        }
    }
    throw BoundaryZeroError("f vanishes on the rectangle boundary after 5 jittered attempts");
}

}  // namespace zerofree
