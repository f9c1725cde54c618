#include "zerofree/residue_engine.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace zerofree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxNewton = 50;

// ---------------------------------------------------------------------------
// η_a in binary128 for the final Newton polish and the residual.
// ---------------------------------------------------------------------------

using quad = __float128;
using cquad = __complex128;

cquad make_cquad(quad re, quad im) {
    cquad z;
    __real__ z = re;
    __imag__ z = im;
    return z;
}

cquad to_cquad(cplx z) { return make_cquad(z.real(), z.imag()); }
cplx to_cplx(cquad z) { return {double(crealq(z)), double(cimagq(z))}; }

// Series κ = |w| + Re w at most this; cancellation costs e^κ of the 113 bits.
constexpr double kQuadSeriesRadius = 25.0;

cquad eta_series_q(quad a, cquad z) {
    const cquad w = make_cquad(cimagq(z), -crealq(z));  // w = -iz
    const quad s = 1 - 1 / a;
    cquad term = make_cquad(1, 0), sum = term / s;
    const quad tol = quad(1e-36);
    for (int k = 1; k < 4000; ++k) {
        term *= -w / quad(k);
        const cquad add = term / (s + k);
        sum += add;
        if (k > cabsq(w) && cabsq(add) <= tol * (1 + cabsq(sum))) return cexpq(-w) + w * sum;
    }
    throw ConvergenceError("eta_a (binary128 series) did not converge");
}

// e^{w} w^{-σ} Γ(σ, w) by the Legendre continued fraction (modified Lentz).
cquad upper_gamma_cf_q(quad sigma, cquad w) {
    const quad tiny = quad(1e-300) * quad(1e-300);
    cquad b = w + 1 - sigma;
    cquad c = make_cquad(1 / tiny, 0);
    cquad d = 1 / b;
    cquad h = d;
    for (int i = 1; i < 20000; ++i) {
        const quad an = -quad(i) * (quad(i) - sigma);
        b += 2;
        d = an * d + b;
        if (cabsq(d) < tiny) d = make_cquad(tiny, 0);
        c = b + an / c;
        if (cabsq(c) < tiny) c = make_cquad(tiny, 0);
        d = 1 / d;
        const cquad delta = d * c;
        h *= delta;
        if (cabsq(delta - 1) < quad(1e-34)) return h;
    }
    throw ConvergenceError("eta_a (binary128 continued fraction) did not converge");
}

cquad eta_cf_q(quad a, cquad z) {
    const cquad w = make_cquad(cimagq(z), -crealq(z));
    const quad p = 1 / a;
    // w1 + w2 + w3 with w3 = -p(1+p) e^{-w} h / w where Γ(-1-p, w) = e^{-w} w^{-1-p} h.
    const cquad ew = cexpq(-w);
    const cquad h = upper_gamma_cf_q(-1 - p, w);
    return cpowq(w, make_cquad(p, 0)) * tgammaq(1 - p) + p * ew / w - p * (1 + p) * ew * h / w;
}

cquad eta_q(quad a, cquad z) {
    const quad kappa = cabsq(z) + cimagq(z);
    return kappa <= kQuadSeriesRadius ? eta_series_q(a, z) : eta_cf_q(a, z);
}

// dη/dz = (η - e^{iz}) / (a z).
cquad eta_dz_q(quad a, cquad z, cquad eta) {
    const cquad iz = make_cquad(-cimagq(z), crealq(z));
    return (eta - cexpq(iz)) / (a * z);
}

// ---------------------------------------------------------------------------

bool in_strip(int n, cplx z) {
    if (!(z.imag() < 0)) return false;
    if (n == 0) return std::abs(z.real()) < 1e-12;
    return z.real() > (2 * n - 1.5) * kPi && z.real() < (2 * n + 1.5) * kPi;
}

// Newton in double until the step stalls, then binary128 steps until the
// residual is below 10⁻¹³. Returns the binary128 root and its residual.
struct NewtonResult {
    cquad root;
    double residual;
    int iterations;
};

NewtonResult newton_root(double a, cplx z, bool imaginary_axis) {
    int it = 0;
    for (; it < kMaxNewton - 8; ++it) {
        const cplx f = eta_a<double>(a, z);
        const cplx df = eta_a_dz<double>(a, z);
        cplx step = f / df;
        if (imaginary_axis) step = cplx(0, step.imag());
        z -= step;
        if (!detail::is_finite(z)) throw ConvergenceError("refine_pole: Newton diverged");
        if (std::abs(step) <= 4e-15 * std::abs(z)) break;
    }
    const quad aq = a;
    cquad zq = to_cquad(z);
    for (; it < kMaxNewton; ++it) {
        const cquad f = eta_q(aq, zq);
        const double res = double(cabsq(f));
        if (res < 1e-13) return {zq, res, it};
        cquad step = f / eta_dz_q(aq, zq, f);
        if (imaginary_axis) step = make_cquad(0, cimagq(step));
        zq -= step;
    }
    const double res = double(cabsq(eta_q(aq, zq)));
    if (res < 1e-13) return {zq, res, it};
    throw ConvergenceError("refine_pole: no convergence in " + std::to_string(kMaxNewton) +
                           " Newton steps (residual " + std::to_string(res) + ")");
}

// η_a(-iY) is real: e^{Y} - Y Σ Y^k / (k! (s+k)).
double eta_on_axis(double a, double y) { return eta_a<double>(a, cplx(0, -y)).real(); }

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

// ---------------------------------------------------------------------------

void PoleRecord::validate() const {
    if (!(a > 1)) throw DomainError("PoleRecord: a must exceed 1");
    if (n < 0) throw DomainError("PoleRecord: n must be nonnegative");
    if (!in_strip(n, zeta))
        throw StrayRootError("pole n = " + std::to_string(n) + " at (" + format17(zeta.real()) + ", " +
                             format17(zeta.imag()) + ") lies outside its strip");
    if (!(residual < kPoleResidualTolerance))
        throw ConvergenceError("pole n = " + std::to_string(n) + " residual " + format17(residual));
}

void PoleTable::validate() const {
    if (int(records.size()) != n_max + 1) throw PoleTableError("pole table incomplete");
    for (int n = 0; n <= n_max; ++n) {
        const auto& r = records[n];
        if (r.n != n || r.a != a) throw PoleTableError("pole table out of order at n = " + std::to_string(n));
        try {
            r.validate();
        } catch (const Error& e) {
            throw PoleTableError(e.what());
        }
        if (n > 0 && !(r.zeta.real() > records[n - 1].zeta.real()))
            throw PoleTableError("pole real parts not increasing at n = " + std::to_string(n));
    }
}

cplx gamma_curve_point(int n, double x) {
    if (n < 1) throw DomainError("gamma_curve_point: n must be positive");
    const double lo = (2 * n - 1.5) * kPi, hi = (2 * n - 0.5) * kPi;
    if (!(x > lo && x <= hi)) throw DomainError("gamma_curve_point: x outside ((2n-3/2)π, (2n-1/2)π]");
    if (x == hi) return {x, 0};
    return {x, -x * std::tan((n - 0.25) * kPi - x / 2)};
}

double log_abs_gamma_neg_inv(double a) {
    if (!(a > 1)) throw DomainError("log_abs_gamma_neg_inv: requires a > 1");
    return std::lgamma(-1 / a);
}

double asymptotic_pole_height(double a, int n) {
    if (!(a > 1)) throw DomainError("initial_pole_guess: requires a > 1");
    if (n < 1) throw DomainError("initial_pole_guess: n must be positive");
    const double g = log_abs_gamma_neg_inv(a);
    const double q = (1 + 1 / a) / 2, xn = 2 * kPi * n;
    const auto lhs = [&](double y) { return y - q * std::log(xn * xn + y * y) - g; };
    // lhs(0) < 0 and lhs has slope in (1 - 1/(2π), 1]; double hi until the sign flips.
    double lo = 0, hi = g + 2 * q * std::log(xn) + 1;
    while (lhs(hi) <= 0) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = (lo + hi) / 2;
        (lhs(mid) > 0 ? hi : lo) = mid;
    }
    if (!(hi - lo <= 1e-12 * hi)) throw ConvergenceError("asymptotic_pole_height: bisection failed");
    return (lo + hi) / 2;
}

cplx initial_pole_guess(double a, int n) {
    const double y = asymptotic_pole_height(a, n);
    return {(2 * n - 1 / a) * kPi + (1 + 1 / a) * std::atan(2 * kPi * n / y), -y};
}

PoleRecord refine_pole(double a, cplx guess, int n) {
    if (!(a > 1)) throw DomainError("refine_pole: requires a > 1");
    if (n < 1) throw DomainError("refine_pole: n must be positive (use refine_pole_zero)");
    if (!detail::is_finite(guess)) throw DomainError("refine_pole: guess must be finite");
    const NewtonResult nr = newton_root(a, guess, false);
    PoleRecord r;
    r.n = n;
    r.a = a;
    r.zeta = to_cplx(nr.root);
    r.residual = nr.residual;
    r.guess_distance = std::abs(r.zeta - initial_pole_guess(a, n));
    if (!in_strip(n, r.zeta))
        throw StrayRootError("Newton from (" + format17(guess.real()) + ", " + format17(guess.imag()) +
                             ") converged to (" + format17(r.zeta.real()) + ", " + format17(r.zeta.imag()) +
                             "), outside strip n = " + std::to_string(n));
    r.dzeta_da = dzeta_da(a, r);
    return r;
}

PoleRecord refine_pole_zero(double a) {
    if (!(a > 1)) throw DomainError("refine_pole: requires a > 1");
    // η(0) = 1; step outward until η(-iY) changes sign, then bisect.
    double lo = 0, hi = 0.5;
    while (eta_on_axis(a, hi) > 0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e4) throw ConvergenceError("refine_pole_zero: no sign change on the imaginary axis");
    }
    for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = (lo + hi) / 2;
        (eta_on_axis(a, mid) > 0 ? lo : hi) = mid;
    }
    const NewtonResult nr = newton_root(a, cplx(0, -(lo + hi) / 2), true);
    PoleRecord r;
    r.n = 0;
    r.a = a;
    r.zeta = cplx(0, double(cimagq(nr.root)));
    r.residual = nr.residual;
    r.guess_distance = 0;
    r.dzeta_da = dzeta_da(a, r);
    r.dzeta_da = cplx(0, r.dzeta_da.imag());  // ζ_0(a) stays on the axis
    return r;
}

PoleRecord find_pole(double a, int n, const std::optional<cplx>& warm) {
    if (n == 0) return refine_pole_zero(a);
    if (warm) {
        try {
            return refine_pole(a, *warm, n);
        } catch (const StrayRootError&) {
        } catch (const ConvergenceError&) {
        }
    }
    return refine_pole(a, initial_pole_guess(a, n), n);
}

cplx dzeta_da(double a, const PoleRecord& record) {
    const cplx z = record.zeta;
    const cplx dz = eta_a_dz<double>(a, z);
    const cplx da = eta_a_da<double>(a, z);
    const cplx out = -da / dz;
    if (!detail::is_finite(out)) throw ConvergenceError("dzeta_da: non-finite derivative");
    return out;
}

PoleTable compute_pole_table(double a, int n_max, const PoleTable* warm) {
    if (n_max < 0) throw DomainError("compute_pole_table: n_max must be nonnegative");
    PoleTable t;
    t.a = a;
    t.n_max = n_max;
    t.records.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        std::optional<cplx> start;
        if (warm && n < int(warm->records.size())) start = warm->records[n].zeta;
        t.records.push_back(find_pole(a, n, start));
    }
    t.validate();
    return t;
}

std::vector<PoleTable> sweep_pole_tables(const std::vector<double>& as, int n_max) {
    std::vector<PoleTable> out;
    out.reserve(as.size());
    for (double a : as) out.push_back(compute_pole_table(a, n_max, out.empty() ? nullptr : &out.back()));
    return out;
}

cplx contour_residue(double a, cplx center, double radius, int points) {
    if (!(radius > 0) || points < 4) throw DomainError("contour_residue: bad circle");
    cplx sum(0);
    for (int k = 0; k < points; ++k) {
        const cplx u = std::polar(1.0, 2 * kPi * k / points);
        const cplx z = center + radius * u;
        const cplx psi = std::exp(cplx(0, -1) * z) / (z * eta_a<double>(a, z));
        sum += psi * radius * u;  // dz = i r u dθ; the i cancels against 1/(2πi)
    }
    const cplx out = sum / double(points);
    if (!detail::is_finite(out)) throw ConvergenceError("contour_residue: non-finite integrand");
    return out;
}

double residue_check(double a, const PoleRecord& record) {
    const cplx expected = -a * std::exp(cplx(0, -2) * record.zeta);
    // The circle must exclude the pole of Ψ_a at the origin, which ζ_0 approaches as a → 1⁺.
    const double radius = std::min(1e-2, std::abs(record.zeta) / 2);
    return std::abs(contour_residue(a, record.zeta, radius) - expected);
}

namespace {

void check_table(const PoleTable& table, int n_max) {
    if (n_max < 0 || int(table.records.size()) <= n_max)
        throw PoleTableError("pole table has " + std::to_string(table.records.size()) + " records, need " +
                             std::to_string(n_max + 1));
    for (int n = 0; n <= n_max; ++n) {
        if (table.records[n].n != n) throw PoleTableError("pole table out of order");
        if (!(table.records[n].residual < kPoleResidualTolerance))
            throw PoleTableError("pole n = " + std::to_string(n) + " failed its residual check");
    }
}

// Tail Σ_{|n|>N} of terms decaying like n^{-q}, q = 2(1 + 1/a), estimated
// from the last term: 2|t_N| N / (q - 1).
double decay_tail(double last_term, int n_max, double a) {
    const double q = 2 * (1 + 1 / a);
    return 2 * last_term * std::max(n_max, 1) / (q - 1);
}

}  // namespace

ResidueSum prob_tail_residue(const PoleTable& table, int n_max) {
    check_table(table, n_max);
    const double a = table.a;
    double sum = 0, last = 0;
    for (int n = 0; n <= n_max; ++n) {
        const cplx t = a * std::exp(cplx(0, -2) * table.records[n].zeta);
        sum += n == 0 ? t.real() : 2 * t.real();
        last = std::abs(t);
    }
    return {sum, n_max > 0 ? decay_tail(last, n_max, a) : last};
}

ResidueSum density_residue(const PoleTable& table, int n_max) {
    check_table(table, n_max);
    const double a = table.a;
    double sum = 0, last = 0;
    for (int n = 0; n <= n_max; ++n) {
        const auto& r = table.records[n];
        const cplx t = 2.0 * std::exp(cplx(0, -2) * r.zeta) * (cplx(0, 2 * a) * r.dzeta_da - 1.0);
        sum += n == 0 ? t.real() : 2 * t.real();
        last = std::abs(t);
    }
    return {sum, n_max > 0 ? decay_tail(last, n_max, a) : last};
}

namespace {

PoleTable table_for(double c, int n_max, PoleCache* cache) {
    if (!(c > 0.5)) throw DomainError("residue series: requires c > 1/2");
    const double a = 2 * c;
    return cache ? cache->get(a, n_max) : compute_pole_table(a, n_max);
}

}  // namespace

double prob_tail_residue(double c, int n_max, PoleCache* cache) {
    return prob_tail_residue(table_for(c, n_max, cache), n_max).value;
}

double density_residue(double c, int n_max, PoleCache* cache) {
    return density_residue(table_for(c, n_max, cache), n_max).value;
}

CurveTable density_residue_curve(const std::vector<double>& cs, int n_max, PoleCache* cache) {
    CurveTable out;
    out.method = CurveMethod::residue;
    std::optional<PoleTable> prev;
    for (double c : cs) {
        if (!(c > 0.5)) throw DomainError("density_residue_curve: requires c > 1/2");
        const double a = 2 * c;
        PoleTable t = cache ? cache->get(a, n_max, prev ? &*prev : nullptr)
                            : compute_pole_table(a, n_max, prev ? &*prev : nullptr);
        const ResidueSum s = density_residue(t, n_max);
        out.abscissae.push_back(c);
        out.values.push_back(s.value);
        out.err_estimates.push_back(s.truncation_estimate);
        prev = std::move(t);
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// CSV and cache
// ---------------------------------------------------------------------------

void write_pole_csv(std::ostream& out, const std::vector<PoleTable>& tables) {
    std::vector<const PoleTable*> order;
    for (const auto& t : tables) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](auto* x, auto* y) { return x->a < y->a; });
    out << "a,n,re_zeta,im_zeta,re_dzeta_da,im_dzeta_da,residual\n";
    for (const PoleTable* t : order)
        for (const auto& r : t->records)
            out << format17(r.a) << ',' << r.n << ',' << format17(r.zeta.real()) << ',' << format17(r.zeta.imag())
                << ',' << format17(r.dzeta_da.real()) << ',' << format17(r.dzeta_da.imag()) << ','
                << format17(r.residual) << '\n';
}

std::vector<PoleTable> read_pole_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "a,n,re_zeta,im_zeta,re_dzeta_da,im_dzeta_da,residual")
        throw PoleTableError("pole CSV: missing or unexpected header");
    std::vector<PoleTable> tables;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> f;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() != 7) throw PoleTableError("pole CSV: expected 7 fields in '" + line + "'");
        PoleRecord r;
        try {
            r.a = std::stod(f[0]);
            r.n = std::stoi(f[1]);
            r.zeta = {std::stod(f[2]), std::stod(f[3])};
            r.dzeta_da = {std::stod(f[4]), std::stod(f[5])};
            r.residual = std::stod(f[6]);
        } catch (const std::exception&) {
            throw PoleTableError("pole CSV: unparsable row '" + line + "'");
        }
        r.guess_distance = r.n == 0 ? 0 : std::abs(r.zeta - initial_pole_guess(r.a, r.n));
        if (tables.empty() || tables.back().a != r.a) {
            tables.push_back({});
            tables.back().a = r.a;
        }
        tables.back().records.push_back(r);
    }
    for (auto& t : tables) {
        t.n_max = int(t.records.size()) - 1;
        t.validate();
    }
    return tables;
}

PoleCache::PoleCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path PoleCache::default_directory() {
    if (const char* env = std::getenv("ZEROFREE_CACHE_DIR"); env && *env) return env;
    return ".zerofree-cache";
}

std::filesystem::path PoleCache::path_for(double a, int n_max) const {
    const std::string key = format17(a) + "|" + std::to_string(n_max) + "|" + kPoleAlgorithmVersion;
    char name[64];
    std::snprintf(name, sizeof name, "poles-%016llx.csv", static_cast<unsigned long long>(fnv1a(key)));
    return dir_ / name;
}

std::optional<PoleTable> PoleCache::load(double a, int n_max) const {
    std::ifstream in(path_for(a, n_max));
    if (!in) return std::nullopt;
    try {
        auto tables = read_pole_csv(in);
        if (tables.size() == 1 && tables[0].a == a && tables[0].n_max == n_max) return tables[0];
    } catch (const PoleTableError&) {
    }
    return std::nullopt;  // corrupt or foreign file: recompute
}

void PoleCache::store(const PoleTable& table) const {
    std::filesystem::create_directories(dir_);
    const auto target = path_for(table.a, table.n_max);
    auto tmp = target;
    tmp += ".tmp" + std::to_string(fnv1a(target.string() + std::to_string(std::rand())));
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write pole cache file " + tmp.string());
        write_pole_csv(out, {table});
        if (!out) throw Error("failed writing pole cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

PoleTable PoleCache::get(double a, int n_max, const PoleTable* warm) const {
    if (auto hit = load(a, n_max)) return *hit;
    PoleTable t = compute_pole_table(a, n_max, warm);
    store(t);
    return t;
}

}  // namespace zerofree
