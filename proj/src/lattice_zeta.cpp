#include "zerofree/lattice_zeta.hpp"

#include "zerofree/philox.hpp"
#include "zerofree/special_functions.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;

double abs_det(const Eigen::MatrixXd& m) { return std::abs(m.determinant()); }

// Fincke–Pohst search over integer x with |x·B|² ≤ r2, B the rows of `rows`.
// `visit(x, norm2)` sees every nonzero x with first nonzero coordinate, counted
// from the last index, positive (one representative per ±pair).
template <class Visit>
void fincke_pohst(const Eigen::MatrixXd& rows, double r2, Visit&& visit) {
    const int n = int(rows.rows());
    const Eigen::MatrixXd gram = rows * rows.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw SingularBasisError("Gram matrix is not positive definite");
    const Eigen::MatrixXd r = llt.matrixL().transpose();  // |x·B|² = |R x|²

    std::vector<std::int64_t> x(n, 0);
    // Slack r2 grows by a few ulps so points exactly on the sphere are kept.
    const double limit = r2 * (1 + 1e-12);
    auto rec = [&](auto&& self, int i, double used, bool positive_so_far) -> void {
        double shift = 0;
        for (int j = i + 1; j < n; ++j) shift += r(i, j) * double(x[j]);
        const double centre = -shift / r(i, i);
        const double rem = limit - used;
        if (rem < 0) return;
        const double half = std::sqrt(rem) / r(i, i);
        auto lo = std::int64_t(std::ceil(centre - half));
        const auto hi = std::int64_t(std::floor(centre + half));
        // Sign canonicalization: while all higher coordinates are zero, only x_i ≥ 0.
        if (!positive_so_far) lo = std::max<std::int64_t>(lo, 0);
        for (std::int64_t xi = lo; xi <= hi; ++xi) {
            x[i] = xi;
            const double t = r(i, i) * (double(xi) - centre);
            const double next = used + t * t;
            if (next > limit) continue;
            const bool pos = positive_so_far || xi > 0;
            if (i == 0) {
                if (pos) visit(x, next);
            } else {
                self(self, i - 1, next, pos);
            }
        }
        x[i] = 0;
    };
    rec(rec, n - 1, 0.0, false);
}

std::int64_t gcd_of(const std::vector<std::int64_t>& x) {
    std::int64_t g = 0;
    for (auto v : x) g = std::gcd(g, v < 0 ? -v : v);
    return g;
}

// Expected number of primitive pairs in the ball of radius R (covolume 1).
double expected_pairs(int n, double radius) {
    return unit_ball_volume(n) * std::pow(radius, n) / (2 * riemann_zeta(double(n)));
}

double tail_bound_for(int n, double sigma, double radius) {
    return 2 * n * unit_ball_volume(n) * std::pow(radius, n - 2 * sigma) / (2 * sigma - n);
}

}  // namespace

// ---------------------------------------------------------------------------
// Bases

void LatticeBasis::validate() const {
    if (dimension < 2) throw DomainError("lattice dimension must be at least 2");
    if (rows.rows() != dimension || rows.cols() != dimension)
        throw DomainError("basis must be a dimension x dimension matrix");
    if (!rows.allFinite()) throw DomainError("basis entries must be finite");
    double scale = 1;
    for (int i = 0; i < dimension; ++i) scale *= rows.row(i).norm();
    const double det = abs_det(rows);
    if (!(det > 1e-14 * scale)) throw SingularBasisError("basis is singular");
    if (normalized && std::abs(det - 1) > 1e-12)
        throw DomainError("basis flagged normalized but |det| = " + std::to_string(det));
}

LatticeBasis make_basis(const std::vector<std::vector<double>>& rows) {
    const int n = int(rows.size());
    LatticeBasis b;
    b.dimension = n;
    b.rows.resize(n, n);
    for (int i = 0; i < n; ++i) {
        if (int(rows[i].size()) != n) throw DomainError("basis rows must have length equal to the dimension");
        for (int j = 0; j < n; ++j) b.rows(i, j) = rows[i][j];
    }
    b.normalized = false;
    b.validate();
    b.normalized = std::abs(abs_det(b.rows) - 1) <= 1e-12;
    return b;
}

LatticeBasis normalize_covolume(const LatticeBasis& basis) {
    LatticeBasis b = basis;
    b.normalized = false;
    b.validate();
    const double det = abs_det(b.rows);
    b.rows *= std::pow(det, -1.0 / b.dimension);
    b.normalized = true;
    if (std::abs(abs_det(b.rows) - 1) > 1e-12) {
        // One more pass absorbs the rounding of the first scaling.
        b.rows *= std::pow(abs_det(b.rows), -1.0 / b.dimension);
    }
    b.validate();
    return b;
}

LatticeBasis lll_reduce(const LatticeBasis& basis, double delta) {
    basis.validate();
    LatticeBasis out = basis;
    Eigen::MatrixXd& b = out.rows;
    const int n = basis.dimension;
    Eigen::MatrixXd bstar(n, n), mu = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd norms(n);
    auto gram_schmidt = [&] {
        for (int i = 0; i < n; ++i) {
            bstar.row(i) = b.row(i);
            for (int j = 0; j < i; ++j) {
                mu(i, j) = b.row(i).dot(bstar.row(j)) / norms(j);
                bstar.row(i) -= mu(i, j) * bstar.row(j);
            }
            norms(i) = bstar.row(i).squaredNorm();
        }
    };
    gram_schmidt();
    int k = 1, guard = 0;
    while (k < n) {
        if (++guard > 100000) throw ConvergenceError("LLL reduction did not terminate");
        for (int j = k - 1; j >= 0; --j) {
            const double q = std::round(mu(k, j));
            if (q != 0) {
                b.row(k) -= q * b.row(j);
                gram_schmidt();
            }
        }
        if (norms(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norms(k - 1)) {
            ++k;
        } else {
            b.row(k).swap(b.row(k - 1));
            gram_schmidt();
            k = std::max(k - 1, 1);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shells

void ShellSpectrum::validate() const {
    if (shells.empty()) throw DomainError("spectrum has no shells");
    for (std::size_t i = 0; i < shells.size(); ++i) {
        if (!(shells[i].length > 0) || shells[i].primitive_pair_count <= 0)
            throw DomainError("shell lengths and counts must be positive");
        if (i > 0 && !(shells[i].length > shells[i - 1].length))
            throw DomainError("shell lengths must increase strictly");
    }
    if (m_L != shells.front().length) throw DomainError("m_L must equal the first shell length");
    if (shells.back().length > cutoff_radius * (1 + 1e-9)) throw DomainError("shell beyond the cutoff radius");
}

std::int64_t ShellSpectrum::pair_count() const {
    std::int64_t total = 0;
    for (const auto& s : shells) total += s.primitive_pair_count;
    return total;
}

double shortest_vector_length(const LatticeBasis& basis) {
    const LatticeBasis red = lll_reduce(basis);
    double best2 = red.rows.row(0).squaredNorm();
    for (int i = 1; i < red.dimension; ++i) best2 = std::min(best2, red.rows.row(i).squaredNorm());
    fincke_pohst(red.rows, best2, [&](const std::vector<std::int64_t>&, double norm2) {
        best2 = std::min(best2, norm2);
    });
    return std::sqrt(best2);
}

ShellSpectrum enumerate_shells(const LatticeBasis& basis, double radius, std::int64_t max_pairs) {
    basis.validate();
    if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("radius must be positive and finite");
    const LatticeBasis red = lll_reduce(basis);
    const double m = shortest_vector_length(red);
    radius = std::max(radius, m);
    const double covolume = abs_det(red.rows);
    if (expected_pairs(red.dimension, radius / std::pow(covolume, 1.0 / red.dimension)) > 2.0 * double(max_pairs))
        throw ExplosionError("radius " + std::to_string(radius) + " would exceed the pair cap");

    std::vector<double> norms2;
    fincke_pohst(red.rows, radius * radius, [&](const std::vector<std::int64_t>& x, double norm2) {
        if (gcd_of(x) != 1) return;
        if (std::int64_t(norms2.size()) >= max_pairs)
            throw ExplosionError("more than " + std::to_string(max_pairs) + " primitive pairs");
        norms2.push_back(norm2);
    });
    std::sort(norms2.begin(), norms2.end());

    ShellSpectrum spec;
    spec.dimension = red.dimension;
    spec.cutoff_radius = radius;
    for (double q : norms2) {
        const double len = std::sqrt(q);
        if (!spec.shells.empty() && len - spec.shells.back().length <= kShellMergeTolerance * len) {
            ++spec.shells.back().primitive_pair_count;
        } else {
            spec.shells.push_back({len, 1});
        }
    }
    if (spec.shells.empty()) throw DomainError("no lattice vector inside the radius");
    // The shortest vector is primitive, so the first shell is m(L) itself.
    spec.shells.front().length = std::min(spec.shells.front().length, m);
    spec.m_L = spec.shells.front().length;
    spec.validate();
    return spec;
}

std::vector<std::vector<std::int64_t>> enumerate_vectors(const LatticeBasis& basis, double radius,
                                                         std::int64_t max_vectors) {
    basis.validate();
    std::vector<std::vector<std::int64_t>> out;
    fincke_pohst(basis.rows, radius * radius, [&](const std::vector<std::int64_t>& x, double) {
        if (std::int64_t(out.size()) + 2 > max_vectors) throw ExplosionError("vector cap exceeded");
        out.push_back(x);
        std::vector<std::int64_t> neg(x.size());
        std::transform(x.begin(), x.end(), neg.begin(), [](std::int64_t v) { return -v; });
        out.push_back(std::move(neg));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Zeta functions

double riemann_zeta(double s) {
    if (!(s > 1)) throw DomainError("riemann_zeta needs s > 1");
    // Euler–Maclaurin with N = 12 and Bernoulli corrections through B_20.
    constexpr int kN = 12;
    static constexpr double kB2j[] = {1.0 / 6,        -1.0 / 30,     1.0 / 42,       -1.0 / 30,
                                      5.0 / 66,       -691.0 / 2730, 7.0 / 6,        -3617.0 / 510,
                                      43867.0 / 798,  -174611.0 / 330};
    double sum = 0;
    for (int k = kN - 1; k >= 1; --k) sum += std::pow(double(k), -s);
    const double nn = kN;
    sum += std::pow(nn, 1 - s) / (s - 1) + 0.5 * std::pow(nn, -s);
    // term_j = B_{2j}/(2j)! · s(s+1)…(s+2j-2) · N^{-s-2j+1}
    double rising = s;              // s(s+1)…(s+2j-2)
    double factorial = 2;           // (2j)!
    double power = std::pow(nn, -s - 1);
    for (int j = 1; j <= 10; ++j) {
        sum += kB2j[j - 1] / factorial * rising * power;
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        factorial *= double(2 * j + 1) * double(2 * j + 2);
        power /= nn * nn;
    }
    return sum;
}

double unit_ball_volume(int n) {
    if (n < 1) throw DomainError("dimension must be positive");
    return std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1);
}

EpsteinResult epstein_zeta_from_shells(const ShellSpectrum& spectrum, double sigma) {
    spectrum.validate();
    const int n = spectrum.dimension;
    if (!(sigma > n / 2.0)) throw DomainError("Epstein zeta needs sigma > n/2");
    double prim = 0;
    for (auto it = spectrum.shells.rbegin(); it != spectrum.shells.rend(); ++it)
        prim += double(it->primitive_pair_count) * std::pow(it->length, -2 * sigma);
    EpsteinResult r;
    r.value = 2 * riemann_zeta(2 * sigma) * prim;
    r.tail_bound = tail_bound_for(n, sigma, spectrum.cutoff_radius);
    r.radius = spectrum.cutoff_radius;
    r.pairs_used = spectrum.pair_count();
    return r;
}

EpsteinResult epstein_zeta_real(const LatticeBasis& basis, double sigma, double tol, std::int64_t max_pairs) {
    basis.validate();
    if (!basis.normalized) throw DomainError("epstein_zeta_real expects a covolume-one basis");
    const int n = basis.dimension;
    if (!(sigma > n / 2.0)) throw DomainError("Epstein zeta needs sigma > n/2");
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
    const double excess = 2 * sigma - n;
    const double radius = std::pow(2 * n * unit_ball_volume(n) / (excess * tol), 1 / excess);
    if (!std::isfinite(radius) || expected_pairs(n, radius) > double(max_pairs))
        throw TailError("tail bound " + std::to_string(tol) + " at sigma " + std::to_string(sigma) +
                        " needs radius " + std::to_string(radius) + " beyond the enumeration cap");
    return epstein_zeta_from_shells(enumerate_shells(basis, radius, max_pairs), sigma);
}

// ---------------------------------------------------------------------------
// σ̃

double alpha_function(const ShellSpectrum& spectrum, double sigma) {
    double s = 0;
    for (auto it = spectrum.shells.rbegin(); it != spectrum.shells.rend(); ++it)
        s += double(it->primitive_pair_count) * std::pow(it->length, -2 * sigma);
    return 2 * std::pow(spectrum.m_L, -2 * sigma) - s;
}

double primitive_tail_mean(int n, double sigma, double radius) {
    if (!(sigma > n / 2.0)) throw DomainError("primitive tail needs sigma > n/2");
    return n * unit_ball_volume(n) * std::pow(radius, n - 2 * sigma) /
           (2 * riemann_zeta(double(n)) * (2 * sigma - n));
}

double sigma_tilde_for_spectrum(const ShellSpectrum& spectrum, double tol, bool continuum_tail) {
    spectrum.validate();
    if (spectrum.shells.front().primitive_pair_count > 1)
        throw MultipleMinimaError(std::to_string(spectrum.shells.front().primitive_pair_count) +
                                  " primitive pairs of minimal length; sigma_tilde = +inf");
    // With ℓ = |v|/m > 1, m^{2σ}α(σ) = 1 - Σ_{other pairs} ℓ^{-2σ} increases strictly;
    // so does the continuum tail term -(m^{2σ})·mean(R, σ).
    const double m = spectrum.m_L;
    const int n = spectrum.dimension;
    auto beta = [&](double sigma) {
        double s = 0;
        for (std::size_t i = spectrum.shells.size(); i-- > 1;)
            s += double(spectrum.shells[i].primitive_pair_count) * std::pow(spectrum.shells[i].length / m, -2 * sigma);
        if (continuum_tail) s += std::pow(m, 2 * sigma) * primitive_tail_mean(n, sigma, spectrum.cutoff_radius);
        return 1 - s;
    };
    double lo = n / 2.0, hi = lo + 1;
    if (continuum_tail) {
        // β → -∞ as σ → n/2⁺; step towards n/2 until it is negative.
        double gap = 0.5;
        while (beta(lo + gap) >= 0) {
            gap /= 2;
            if (gap < 1e-15) throw NoRootError("alpha stays nonnegative down to sigma = n/2");
        }
        lo += gap;
    } else if (beta(lo) >= 0) {
        throw NoRootError("truncated alpha is nonnegative at sigma = n/2");
    }
    if (hi <= lo) hi = lo + 1;
    for (int i = 0; beta(hi) <= 0; ++i) {
        if (i > 60) throw NoRootError("alpha stays negative");
        lo = hi;
        hi *= 2;
    }
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        (beta(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Squared lengths of one representative per ±pair of L and of its dual L*,
// both within `radius`.
struct ThetaNorms {
    int dimension = 0;
    double radius = 0;
    std::vector<double> lattice;
    std::vector<double> dual;
};

ThetaNorms theta_norms(const LatticeBasis& basis, double radius) {
    ThetaNorms t;
    t.dimension = basis.dimension;
    t.radius = radius;
    const LatticeBasis red = lll_reduce(basis);
    LatticeBasis dual = red;
    dual.rows = red.rows.inverse().transpose();
    dual.normalized = false;
    const LatticeBasis dual_red = lll_reduce(dual);
    const double r2 = radius * radius;
    fincke_pohst(red.rows, r2, [&](const std::vector<std::int64_t>&, double q) { t.lattice.push_back(q); });
    fincke_pohst(dual_red.rows, r2, [&](const std::vector<std::int64_t>&, double q) { t.dual.push_back(q); });
    // Largest first: the sums below then add small terms before large ones.
    std::sort(t.lattice.rbegin(), t.lattice.rend());
    std::sort(t.dual.rbegin(), t.dual.rend());
    return t;
}

// Γ(a, x)·x^{-a} for real a and x > 0.
double incomplete_kernel(double a, double x) {
    const double scaled = upper_gamma_scaled<double>(a, Complex<double>(x, 0)).real();  // e^{x}Γ(a,x)
    return scaled * std::exp(-x - a * std::log(x));
}

// Riemann's theta splitting for a covolume-one lattice:
// π^{-s}Γ(s)E(s) = 1/(s - n/2) - 1/s + Σ′_L Γ(s,π|v|²)(π|v|²)^{-s}
//                                     + Σ′_{L*} Γ(n/2-s,π|w|²)(π|w|²)^{s-n/2}.
double epstein_theta_from_norms(const ThetaNorms& t, double s) {
    const double half_n = t.dimension / 2.0;
    double sum = 0;
    for (double q : t.lattice) sum += 2 * incomplete_kernel(s, kPi * q);
    for (double q : t.dual) sum += 2 * incomplete_kernel(half_n - s, kPi * q);
    sum += 1 / (s - half_n) - 1 / s;
    return std::exp(s * std::log(kPi) - std::lgamma(s)) * sum;
}

// α(σ) = 2m^{-2σ} - E(σ)/(2ζ(2σ)) on the theta-split sums.
double alpha_theta(const ThetaNorms& t, double m, double sigma) {
    return 2 * std::pow(m, -2 * sigma) - epstein_theta_from_norms(t, sigma) / (2 * riemann_zeta(2 * sigma));
}

double alpha_theta_root(const ThetaNorms& t, double m, double tol) {
    const double half_n = t.dimension / 2.0;
    // E has a simple pole at n/2, so α → -∞ there; α > 0 once m^{-2σ} dominates.
    double gap = 0.5;
    while (alpha_theta(t, m, half_n + gap) >= 0) {
        gap /= 2;
        if (gap < 1e-15) throw NoRootError("alpha stays nonnegative down to sigma = n/2");
    }
    double lo = half_n + gap, hi = half_n + 1;
    if (hi <= lo) hi = lo + 1;
    for (int i = 0; alpha_theta(t, m, hi) <= 0; ++i) {
        if (i > 60) throw NoRootError("alpha stays negative");
        lo = hi;
        hi *= 2;
    }
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        (alpha_theta(t, m, mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EpsteinResult epstein_zeta_theta(const LatticeBasis& basis, double sigma, double tol) {
    basis.validate();
    if (!basis.normalized) throw DomainError("epstein_zeta_theta expects a covolume-one basis");
    if (!(sigma > basis.dimension / 2.0)) throw DomainError("Epstein zeta needs sigma > n/2");
    EpsteinResult r;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (double radius = 2; radius < 64; radius *= 1.5) {
        const ThetaNorms t = theta_norms(basis, radius);
        r.value = epstein_theta_from_norms(t, sigma);
        r.radius = radius;
        r.pairs_used = std::int64_t(t.lattice.size() + t.dual.size());
        if (std::isfinite(previous)) {
            r.tail_bound = std::abs(r.value - previous);
            if (r.tail_bound <= tol * std::abs(r.value)) return r;
        }
        previous = r.value;
    }
    throw TailError("theta-split Epstein sum did not settle");
}

double sigma_tilde_theta(const LatticeBasis& basis, double radius, double tol) {
    basis.validate();
    if (!basis.normalized) throw DomainError("sigma_tilde expects a covolume-one basis");
    const ShellSpectrum first = enumerate_shells(basis, shortest_vector_length(basis) * (1 + 1e-6));
    if (first.shells.front().primitive_pair_count > 1)
        throw MultipleMinimaError(std::to_string(first.shells.front().primitive_pair_count) +
                                  " primitive pairs of minimal length; sigma_tilde = +inf");
    return alpha_theta_root(theta_norms(basis, radius), first.m_L, tol);
}

SigmaTildeResult sigma_tilde(const LatticeBasis& basis, double tol) {
    basis.validate();
    if (!basis.normalized) throw DomainError("sigma_tilde expects a covolume-one basis");
    SigmaTildeResult r;
    const ShellSpectrum first = enumerate_shells(basis, shortest_vector_length(basis) * (1 + 1e-6));
    r.m_L = first.m_L;
    if (first.shells.front().primitive_pair_count > 1)
        throw MultipleMinimaError(std::to_string(first.shells.front().primitive_pair_count) +
                                  " primitive pairs of minimal length; sigma_tilde = +inf");
    // The theta sums decay on the covolume scale, so very short m(L) must not
    // leave the radius far below 1.
    double radius = std::max(3 * r.m_L, 1.0);
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int round = 1; round <= 8; ++round, radius *= 1.5) {
        const ThetaNorms t = theta_norms(basis, radius);
        const double root = alpha_theta_root(t, r.m_L, std::min(tol, 1e-14));
        r.radius_rounds = round;
        r.radius = radius;
        r.shells_used = std::int64_t(t.lattice.size());
        if (std::isfinite(previous)) {
            r.last_change = std::abs(root - previous);
            if (r.last_change < tol) {
                r.sigma_tilde = root;
                return r;
            }
        }
        previous = root;
    }
    throw TailError("sigma_tilde not stable to " + std::to_string(tol) + " within 8 radius rounds");
}

// ---------------------------------------------------------------------------
// Random lattices and input

RandomLattice2D random_lattice_2d_sample(std::uint64_t seed, std::uint32_t index) {
    PhiloxStream rng(seed, index, 0, 0);
    RandomLattice2D out;
    const double y0 = std::sqrt(3.0) / 2;
    for (;;) {
        ++out.attempts;
        const double x = rng.uniform_open0() - 0.5;
        const double y = y0 / rng.uniform_open0();
        if (x * x + y * y >= 1) {
            out.x = x;
            out.y = y;
            break;
        }
    }
    const double s = 1 / std::sqrt(out.y);
    out.basis = make_basis({{s, 0.0}, {out.x * s, std::sqrt(out.y)}});
    out.basis.normalized = true;
    out.basis.validate();
    return out;
}

LatticeBasis random_lattice_2d(std::uint64_t seed, std::uint32_t index) {
    return random_lattice_2d_sample(seed, index).basis;
}

LatticeBasis lattice_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("lattice JSON does not parse: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dimension") || !j.contains("basis"))
        throw DomainError("lattice JSON needs fields 'dimension' and 'basis'");
    if (!j["dimension"].is_number_integer()) throw DomainError("'dimension' must be an integer");
    const int n = j["dimension"].get<int>();
    const auto& rows = j["basis"];
    if (!rows.is_array() || int(rows.size()) != n) throw DomainError("'basis' must have 'dimension' rows");
    std::vector<std::vector<double>> m;
    for (const auto& row : rows) {
        if (!row.is_array()) throw DomainError("'basis' rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number()) throw DomainError("'basis' entries must be numbers");
            r.push_back(v.get<double>());
        }
        m.push_back(std::move(r));
    }
    if (n < 2) throw DomainError("'dimension' must be at least 2");
    return make_basis(m);
}

}  // namespace zerofree
