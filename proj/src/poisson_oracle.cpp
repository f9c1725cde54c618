#include "zerofree/poisson_oracle.hpp"

#include "zerofree/philox.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <thread>

namespace zerofree {

namespace {

constexpr double kTreeLength = 1099511627776.0;  // 2^40
constexpr double kLeafExpectedCount = 16;
constexpr int kMaxRefinementRounds = 400;

// Stream purposes; each (seed, sample, node, purpose) is an independent stream.
enum Purpose : std::uint32_t { kSplit = 0, kExpand = 1, kRoot = 2, kGaps = 3, kCondGaps = 4, kCondCells = 5 };

// (1 - e^{-x}) and 1 - e^{-x}(1 + x) for x ≥ 0 without cancellation.
double one_minus_exp_neg(double x) { return -std::expm1(-x); }
double one_minus_exp_neg_poly(double x) {
    if (x < 1e-3) return x * x * (0.5 - x * (1.0 / 3 - x / 8));
    return -std::expm1(-x) - x * std::exp(-x);
}

// A dyadic node of [0, 2^40): heap index, level, interval.
struct Node {
    std::uint64_t id;
    int level;
    double lo, hi;
};

Node node_of(std::uint64_t id) {
    const int level = int(std::bit_width(id)) - 1;
    const double width = std::ldexp(kTreeLength, -level);
    const double k = double(id - (std::uint64_t(1) << level));
    return {id, level, k * width, (k + 1) * width};
}

struct Cell {
    Node node;
    std::int64_t count;
    double la, lv, scale;  // log(x₁/u), log(x₁/v), u/(v-u)
};

// Σ_j e^{s·l_j} and Σ_j l_j e^{s·l_j} over a growing set of l_j ≤ 0. Values are
// binned by l = c_b + d with |d| ≤ w/2 and each bin keeps Taylor moments
// Σ d^k/k!, so e^{s l} sums cost one exponential per bin. Rates beyond
// kMaxRate (where the truncated series would lose accuracy) use the raw values.
class ExpSums {
public:
    static constexpr double kWidth = 0.125;
    static constexpr int kOrder = 14;
    static constexpr double kMaxRate = 8;

    void add(double l) {
        raw_.push_back(l);
        const auto b = std::size_t(std::floor(-l / kWidth));
        if (b >= moments_.size()) moments_.resize(b + 1, Moments{});
        const double d = l - centre(b);
        double term = 1;
        for (int k = 0; k <= kOrder; ++k) {
            moments_[b][k] += term;
            term *= d / (k + 1);
        }
    }

    void evaluate(double s, double& sum, double& dsum) const {
        sum = dsum = 0;
        if (s > kMaxRate) {
            for (double l : raw_) {
                const double p = std::exp(s * l);
                sum += p;
                dsum += l * p;
            }
            return;
        }
        for (std::size_t b = 0; b < moments_.size(); ++b) {
            const auto& m = moments_[b];
            if (m[0] == 0) continue;
            double p = m[kOrder], q = kOrder * m[kOrder];
            for (int k = kOrder - 1; k >= 0; --k) {
                p = p * s + m[k];
                if (k >= 1) q = q * s + k * m[k];
            }
            const double c = centre(b), e = std::exp(s * c);
            sum += e * p;
            dsum += e * (c * p + q);
        }
    }

private:
    using Moments = std::array<double, kOrder + 1>;
    static double centre(std::size_t b) { return -(double(b) + 0.5) * kWidth; }

    std::vector<Moments> moments_;
    std::vector<double> raw_;
};

// Values of h(σ) = 1 - Σ_{j≥2} (x₁/x_j)^{2σ} - (cell means) - (mean beyond 2^40)
// and its derivative in σ.
struct Evaluation {
    double h = 0, dh = 0;
    double credited = 0;    // cell means + mean tail, in units of x₁^{-2σ}
    double var_beyond = 0;  // variance of the sum beyond 2^40
};

// One realization of the lazily expanded tree.
class TreeRealization {
public:
    TreeRealization(const MonteCarloConfig& cfg, std::uint32_t index, double horizon)
        : cfg_(cfg), index_(index), horizon_(horizon) {
        const double leaves = cfg.intensity * kTreeLength / kLeafExpectedCount;
        leaf_level_ = std::max(0, int(std::ceil(std::log2(leaves))));
        PhiloxStream rng(cfg.seed, index, 1, kRoot);
        std::poisson_distribution<std::int64_t> root(cfg.intensity * kTreeLength);
        std::vector<std::pair<Node, std::int64_t>> coarse;
        descend(1, root(rng), coarse);
        if (points_.empty()) return;
        std::sort(points_.begin(), points_.end());
        x1_ = points_.front();
        for (std::size_t j = 1; j < points_.size(); ++j) sums_.add(std::log(x1_ / points_[j]));
        for (const auto& [nd, n] : coarse) add_cell(nd, n);
    }

    bool has_first_point() const { return !points_.empty() && points_.front() < horizon_; }

    Evaluation evaluate(double sigma) const {
        Evaluation e;
        const double s2 = 2 * sigma, t = s2 - 1;
        double sum = 0, dsum = 0;
        sums_.evaluate(s2, sum, dsum);
        double cell_sum = 0, dcell = 0;
        for (const auto& c : cells_) {
            // Mean of (x₁/x)^{2σ} over x uniform in [u, v): (x₁/u)^{2σ} u (1 - (u/v)^t) / (t (v-u)).
            const double n = double(c.count), x = t * (c.la - c.lv);
            const double pa = std::exp(s2 * c.la);
            const double b = c.scale * one_minus_exp_neg(x) / t;
            const double db = -c.scale * one_minus_exp_neg_poly(x) / (t * t);
            cell_sum += n * pa * b;
            dcell += n * (2 * c.la * pa * b + 2 * pa * db);
        }
        const double lam = cfg_.intensity, lL = std::log(x1_ / kTreeLength);
        const double tail = lam * kTreeLength * std::exp(s2 * lL) / t;
        const double dtail = tail * (2 * lL - 2 / t);
        e.var_beyond = lam * kTreeLength * std::exp(2 * s2 * lL) / (2 * s2 - 1);
        e.h = 1 - sum - cell_sum - tail;
        e.dh = -2 * dsum - dcell - dtail;
        e.credited = cell_sum + tail;
        return e;
    }

    // Variance of the within-cell positions ignored by the cell means: with
    // positions uniform, ≈ N (range of (x₁/x)^{2σ})² / 12 per cell.
    static double cell_variance(const Cell& c, double s2) {
        const double range = std::exp(s2 * c.la) - std::exp(s2 * c.lv);
        return double(c.count) * range * range / 12;
    }

    double cell_variances(double sigma) const {
        double total = 0;
        for (const auto& c : cells_) total += cell_variance(c, 2 * sigma);
        return total;
    }

    // Split the largest-variance cells (max-heap) until the total is below `target`.
    void refine_to(double sigma, double target) {
        const double s2 = 2 * sigma;
        std::priority_queue<std::pair<double, std::size_t>> heap;
        double total = 0;
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const double v = cell_variance(cells_[i], s2);
            total += v;
            heap.emplace(v, i);
        }
        std::vector<char> dead(cells_.size(), 0);
        cells_.reserve(cells_.size() + 256);
        while (total > target && !heap.empty()) {
            const auto [v, i] = heap.top();
            heap.pop();
            const Cell c = cells_[i];
            dead[i] = 1;
            total -= v;
            const std::size_t before = cells_.size();
            refine(c);
            for (std::size_t j = before; j < cells_.size(); ++j) {
                const double vj = cell_variance(cells_[j], s2);
                total += vj;
                heap.emplace(vj, j);
                dead.push_back(0);
            }
        }
        std::size_t k = 0;
        for (std::size_t i = 0; i < cells_.size(); ++i)
            if (!dead[i]) cells_[k++] = cells_[i];
        cells_.resize(k);
    }

    // Root of the increasing function h: Newton, safeguarded by the bracket
    // that its iterates build up.
    double solve(double start) const {
        double lo = 0.5, hi = std::numeric_limits<double>::infinity();
        double sigma = start > 0.5 ? start : 1.0;
        for (int it = 0; it < 200; ++it) {
            const Evaluation e = evaluate(sigma);
            if (e.h == 0) return sigma;
            (e.h < 0 ? lo : hi) = sigma;
            double next = sigma - e.h / e.dh;
            // h carries rounding noise of a few ulps of its terms, so stop at 10⁻¹⁴ relative.
            if (std::abs(next - sigma) <= 1e-14 * sigma) return next;
            if (!(next > lo && next < hi)) next = std::isfinite(hi) ? (lo + hi) / 2 : 2 * sigma;
            if (next > 1e3) throw NoRootError("sigma equation has no root below 1000");
            if (std::isfinite(hi) && hi - lo <= 4e-16 * hi) return next;
            sigma = next;
        }
        throw ConvergenceError("sigma solver did not converge");
    }

    // Refine cells at a fixed σ until their variance fits the budget, re-solve,
    // and repeat until the budget also holds at the new root.
    SigmaSample refine_and_solve() {
        double sigma = solve(1.0);
        for (int round = 0; round < kMaxRefinementRounds; ++round) {
            const Evaluation e = evaluate(sigma);
            const double budget = std::pow(cfg_.sigma_tol * e.dh, 2);
            if (e.var_beyond > budget / 2)
                throw HorizonError("fluctuation beyond 2^40 exceeds the sigma tolerance");
            if (cell_variances(sigma) + e.var_beyond <= budget)
                return {sigma, e.credited * std::exp(-2 * sigma * std::log(x1_)), horizon_};
            refine_to(sigma, budget / 4);
            sigma = solve(sigma);
        }
        throw ConvergenceError("cell refinement did not reach the sigma tolerance");
    }

private:
    std::int64_t split_left(std::uint64_t id, std::int64_t count) const {
        PhiloxStream rng(cfg_.seed, index_, id, kSplit);
        std::binomial_distribution<std::int64_t> bin(count, 0.5);
        return bin(rng);
    }

    // N sorted uniform points in [lo, hi) by normalized exponential gaps.
    void expand(const Node& nd, std::int64_t count, std::vector<double>& out) const {
        PhiloxStream rng(cfg_.seed, index_, nd.id, kExpand);
        std::vector<double> cum(count + 1);
        double s = 0;
        for (auto& c : cum) c = (s += rng.exponential());
        for (std::int64_t k = 0; k < count; ++k) out.push_back(nd.lo + (nd.hi - nd.lo) * (cum[k] / s));
    }

    void descend(std::uint64_t id, std::int64_t count, std::vector<std::pair<Node, std::int64_t>>& coarse) {
        if (count == 0) return;
        const Node nd = node_of(id);
        if (nd.lo >= horizon_) {
            coarse.emplace_back(nd, count);
            return;
        }
        if (nd.level >= leaf_level_) {
            expand(nd, count, points_);
            return;
        }
        const std::int64_t left = split_left(id, count);
        descend(2 * id, left, coarse);
        descend(2 * id + 1, count - left, coarse);
    }

    void add_cell(const Node& nd, std::int64_t count) {
        cells_.push_back({nd, count, std::log(x1_ / nd.lo), std::log(x1_ / nd.hi), nd.lo / (nd.hi - nd.lo)});
    }

    // Resolve a cell beyond the horizon one level further (or into points).
    void refine(const Cell& c) {
        if (c.node.level >= leaf_level_) {
            std::vector<double> fresh;
            expand(c.node, c.count, fresh);
            for (double x : fresh) sums_.add(std::log(x1_ / x));
            points_.insert(points_.end(), fresh.begin(), fresh.end());
            return;
        }
        const std::int64_t left = split_left(c.node.id, c.count);
        if (left > 0) add_cell(node_of(2 * c.node.id), left);
        if (c.count - left > 0) add_cell(node_of(2 * c.node.id + 1), c.count - left);
    }

    const MonteCarloConfig& cfg_;
    std::uint32_t index_;
    double horizon_;
    int leaf_level_ = 0;
    std::vector<double> points_;
    ExpSums sums_;
    std::vector<Cell> cells_;
    double x1_ = 0;
};

template <class F>
void parallel_for(std::uint32_t n, unsigned threads, F&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, std::max<std::uint32_t>(1, n));
    std::atomic<std::uint32_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::uint32_t begin = next.fetch_add(256);
            if (begin >= n) return;
            for (std::uint32_t i = begin; i < std::min(n, begin + 256); ++i) body(i);
        }
    };
    if (threads == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("c_grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("c_grid must be strictly increasing");
}

}  // namespace

// ---------------------------------------------------------------------------

void PoissonRealization::validate() const {
    if (!(intensity > 0) || !(horizon > 0)) throw DomainError("PoissonRealization: intensity and horizon must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i] > 0) || points[i] > horizon) throw DomainError("PoissonRealization: point outside (0, horizon]");
        if (i > 0 && !(points[i] > points[i - 1])) throw DomainError("PoissonRealization: points not strictly increasing");
    }
}

PoissonRealization sample_poisson(double intensity, double horizon, std::uint64_t seed, std::uint32_t stream_id) {
    if (!(intensity > 0) || !(horizon > 0)) throw DomainError("sample_poisson: intensity and horizon must be positive");
    PoissonRealization r;
    r.intensity = intensity;
    r.horizon = horizon;
    r.seed = seed;
    r.stream_id = stream_id;
    PhiloxStream rng(seed, stream_id, 0, kGaps);
    double x = 0;
    for (;;) {
        x += rng.exponential() / intensity;
        if (x > horizon) break;
        if (r.points.empty() || x > r.points.back()) r.points.push_back(x);
    }
    return r;
}

double sigma_equation(const PoissonRealization& real, double sigma) {
    if (real.points.empty()) throw NoRootError("sigma_equation: empty realization");
    if (!(sigma > 0.5)) throw DomainError("sigma_equation: requires sigma > 1/2");
    const double x1 = real.points.front(), s2 = 2 * sigma;
    double g = std::pow(x1, -s2);
    for (std::size_t j = 1; j < real.points.size(); ++j) g -= std::pow(real.points[j], -s2);
    return g - real.intensity * std::pow(real.horizon, 1 - s2) / (s2 - 1);
}

SigmaSample solve_sigma(const PoissonRealization& real, double sigma_hi, double tol) {
    real.validate();
    if (real.points.size() < 2) throw NoRootError("solve_sigma: need at least two points");
    const double x1 = real.points.front(), lam = real.intensity, H = real.horizon;
    std::vector<double> lr;
    for (std::size_t j = 1; j < real.points.size(); ++j) lr.push_back(std::log(x1 / real.points[j]));
    const double lh = std::log(x1 / H);
    // h = g / x₁^{-2σ}, increasing in σ.
    const auto tail = [&](double s) { return lam * H * std::exp(2 * s * lh) / (2 * s - 1); };
    const auto h = [&](double s) {
        double sum = 0;
        for (double v : lr) sum += std::exp(2 * s * v);
        return 1 - sum - tail(s);
    };
    double lo = 0.5 + 1e-6, hi = sigma_hi;
    if (h(lo) > 0) throw NoRootError("solve_sigma: g > 0 already at sigma = 1/2 + 1e-6");
    while (h(hi) <= 0) {
        hi *= 2;
        if (hi > 1e3) throw NoRootError("solve_sigma: no sign change below sigma = 1000");
    }
    double mid = (lo + hi) / 2;
    for (int it = 0; it < 200; ++it) {
        mid = (lo + hi) / 2;
        const double v = h(mid);
        if (std::abs(v) < tol || hi - lo <= 4e-16 * hi) break;
        (v < 0 ? lo : hi) = mid;
    }
    const double fluct = std::sqrt(lam * H * std::exp(4 * mid * lh) / (4 * mid - 1));
    if (fluct > 1e-6)
        throw HorizonError("solve_sigma: tail fluctuation " + std::to_string(fluct) +
                           " x1^{-2 sigma} beyond the horizon; extend the horizon");
    return {mid, tail(mid) * std::exp(-2 * mid * std::log(x1)), H};
}

void MonteCarloConfig::validate() const {
    if (!(intensity >= 1e-3 && intensity <= 16)) throw DomainError("MonteCarloConfig: intensity must lie in [1e-3, 16]");
    if (!(base_horizon > 0)) throw DomainError("MonteCarloConfig: base_horizon must be positive");
    if (!(sigma_tol > 0)) throw DomainError("MonteCarloConfig: sigma_tol must be positive");
    if (max_doublings < 0) throw DomainError("MonteCarloConfig: max_doublings must be nonnegative");
}

SigmaSample sample_sigma(const MonteCarloConfig& cfg, std::uint32_t index) {
    cfg.validate();
    double horizon = cfg.base_horizon / cfg.intensity;
    for (int d = 0; d <= cfg.max_doublings; ++d, horizon *= 2) {
        TreeRealization tree(cfg, index, horizon);
        if (tree.has_first_point()) return tree.refine_and_solve();
    }
    throw HorizonError("no point below the horizon after " + std::to_string(cfg.max_doublings) + " doublings");
}

std::vector<SigmaSample> sample_sigmas(const MonteCarloConfig& cfg, std::uint32_t n) {
    cfg.validate();
    std::vector<SigmaSample> out(n);
    std::vector<std::optional<std::string>> errors(n);
    parallel_for(n, cfg.threads, [&](std::uint32_t i) {
        try {
            out[i] = sample_sigma(cfg, i);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    std::uint32_t failed = 0;
    std::string first;
    for (std::uint32_t i = 0; i < n; ++i)
        if (errors[i] && failed++ == 0) first = "sample " + std::to_string(i) + ": " + *errors[i];
    if (failed) throw ConvergenceError(std::to_string(failed) + " of " + std::to_string(n) + " samples failed; " + first);
    return out;
}

CurveTable empirical_cdf_from(const std::vector<double>& sigmas, const std::vector<double>& c_grid, std::uint64_t seed) {
    check_grid(c_grid);
    std::vector<double> s = sigmas;
    std::sort(s.begin(), s.end());
    CurveTable t;
    t.method = CurveMethod::montecarlo;
    t.seed = seed;
    const double n = double(s.size());
    for (double c : c_grid) {
        const double f = double(std::upper_bound(s.begin(), s.end(), c) - s.begin()) / n;
        t.abscissae.push_back(c);
        t.values.push_back(f);
        // One binomial standard deviation.
        t.err_estimates.push_back(std::sqrt(std::max(f * (1 - f), 0.25 / n) / n));
    }
    t.validate();
    return t;
}

CurveTable empirical_cdf(std::uint32_t n_samples, const MonteCarloConfig& cfg, const std::vector<double>& c_grid) {
    if (n_samples < 1000) throw DomainError("empirical_cdf: needs at least 1000 samples");
    check_grid(c_grid);
    const auto samples = sample_sigmas(cfg, n_samples);
    std::vector<double> s;
    s.reserve(samples.size());
    for (const auto& x : samples) s.push_back(x.sigma);
    return empirical_cdf_from(s, c_grid, cfg.seed);
}

std::vector<double> sample_conditional_sum(double a, double delta, std::uint32_t n_samples, std::uint64_t seed) {
    if (!(a > 1)) throw DomainError("sample_conditional_sum: requires a > 1");
    if (!(delta > 0)) throw DomainError("sample_conditional_sum: requires delta > 0");
    constexpr double kExact = 256;  // exact points on (δ, δ + 256]
    constexpr int kCells = 48;      // geometric cells [b_k, 2 b_k) beyond
    std::vector<double> out(n_samples);
    std::vector<std::optional<std::string>> errors(n_samples);
    parallel_for(n_samples, 0, [&](std::uint32_t i) {
        PhiloxStream gaps(seed, i, 0, kCondGaps);
        double x = delta, sum = 0;
        const double end = delta + kExact;
        for (;;) {
            x += gaps.exponential();
            if (x > end) break;
            sum += std::pow(x, -a);
        }
        double var = 0, u = end;
        for (int k = 0; k < kCells; ++k) {
            const double v = 2 * u;
            PhiloxStream rng(seed, i, std::uint64_t(k + 1), kCondCells);
            std::poisson_distribution<std::int64_t> count(v - u);
            const double n = double(count(rng));
            const double pu = std::pow(u, 1 - a), pv = std::pow(v, 1 - a);
            sum += n * (pu - pv) / ((a - 1) * (v - u));
            const double range = std::pow(u, -a) - std::pow(v, -a);
            var += n * range * range / 12;
            u = v;
        }
        const double beyond = std::pow(u, 1 - a) / (a - 1);
        sum += beyond;
        var += std::pow(u, 1 - 2 * a) / (2 * a - 1);
        if (std::sqrt(var) > 1e-3 * std::max(sum, std::pow(delta, -a)))
            errors[i] = "sample " + std::to_string(i) + ": unresolved tail fluctuation too large";
        out[i] = sum;
    });
    for (const auto& e : errors)
        if (e) throw HorizonError(*e);
    return out;
}

double ks_distance(const CurveTable& empirical, const CurveTable& analytic) {
    if (empirical.abscissae != analytic.abscissae || empirical.values.size() != analytic.values.size())
        throw GridMismatchError("ks_distance: tables are on different grids");
    double d = 0;
    for (std::size_t i = 0; i < empirical.values.size(); ++i)
        d = std::max(d, std::abs(empirical.values[i] - analytic.values[i]));
    return d;
}

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= v) ++i;
        while (j < y.size() && y[j] <= v) ++j;
        d = std::max(d, std::abs(double(i) / x.size() - double(j) / y.size()));
    }
    return d;
}

MonteCarloReport monte_carlo_report(std::uint32_t n_samples, const MonteCarloConfig& cfg,
                                    const std::vector<double>& c_grid) {
    if (n_samples == 0) throw DomainError("monte_carlo_report: needs at least one sample");
    check_grid(c_grid);
    MonteCarloReport r;
    r.n_samples = n_samples;
    r.seed = cfg.seed;
    r.intensity = cfg.intensity;
    r.c_grid = c_grid;
    r.wide_uncertainty = n_samples < 1000;
    const auto samples = sample_sigmas(cfg, n_samples);
    std::vector<double> s;
    for (const auto& x : samples) s.push_back(x.sigma);
    const CurveTable emp = empirical_cdf_from(s, c_grid, cfg.seed);
    const CurveTable ana = cdf_curve(c_grid);
    r.empirical = emp.values;
    r.analytic = ana.values;
    r.ks_vs_analytic = ks_distance(emp, ana);
    return r;
}

std::string to_json(const MonteCarloReport& r) {
    nlohmann::json j;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["intensity"] = r.intensity;
    j["c_grid"] = r.c_grid;
    j["empirical_cdf"] = r.empirical;
    j["analytic_cdf"] = r.analytic;
    j["ks_vs_analytic"] = r.ks_vs_analytic;
    j["failed_samples"] = r.failed_samples;
    j["wide_uncertainty"] = r.wide_uncertainty;
    return j.dump(2);
}

}  // namespace zerofree
