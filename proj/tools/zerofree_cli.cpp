// zerofree: command-line front end for the law of the zero-free abscissa, its
// pole and Monte Carlo routes, lattice abscissae and Jessen zero densities.
//
// Exit codes: 0 success, 1 numeric failure (diagnostic JSON on stderr),
// 2 usage error. CSV output carries a header, LF line endings and 17
// significant digits.

#include "zerofree/lattice_zeta.hpp"
#include "zerofree/limit_distribution.hpp"
#include "zerofree/poisson_oracle.hpp"
#include "zerofree/residue_engine.hpp"
#include "zerofree/zero_density.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <typeinfo>
#include <vector>

namespace {

using nlohmann::json;
using namespace zerofree;

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

/// Input problems detected by the CLI itself (mapped to exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Destination chosen by --output (stdout when empty).
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw UsageError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

/// Grid lo, lo+step, … up to hi (inclusive within half a step); exact decimal
/// steps are rebuilt from integer multiples so they do not drift.
std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0) || !std::isfinite(step)) throw UsageError("step must be positive");
    if (!(hi >= lo)) throw UsageError("grid maximum must not be below its minimum");
    const long count = long(std::floor((hi - lo) / step + 0.5)) + 1;
    if (count > 10'000'000) throw UsageError("grid too large");
    std::vector<double> g;
    g.reserve(count);
    for (long k = 0; k < count; ++k) g.push_back(lo + double(k) * step);
    return g;
}

/// The default grid: a = 1 + k/100 for k = 1..400, i.e. c = a/2.
std::vector<double> default_c_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 400; ++k) g.push_back((100.0 + k) / 200.0);
    return g;
}

std::vector<double> c_values(const std::vector<double>& explicit_c, double c_min, double c_max, double step) {
    std::vector<double> cs;
    if (!explicit_c.empty()) {
        cs = explicit_c;
    } else if (std::isnan(c_min) && std::isnan(c_max) && std::isnan(step)) {
        cs = default_c_grid();
    } else {
        if (std::isnan(c_min) || std::isnan(c_max) || std::isnan(step))
            throw UsageError("--c-min, --c-max and --step go together");
        cs = make_grid(c_min, c_max, step);
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!(cs[i] > 0.5) || !std::isfinite(cs[i])) throw UsageError("every c must exceed 1/2");
        if (i > 0 && !(cs[i] > cs[i - 1])) throw UsageError("c values must increase");
    }
    return cs;
}

std::filesystem::path cache_directory(const std::string& flag) {
    return flag.empty() ? PoleCache::default_directory() : std::filesystem::path(flag);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string error_name(const std::exception& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    if (dynamic_cast<const zerofree::Error*>(&e) && colon != std::string::npos) return what.substr(0, colon);
    return "Error";
}

void report_failure(const std::exception& e, const std::string& command) {
    json d;
    d["command"] = command;
    d["error"] = error_name(e);
    d["message"] = e.what();
    std::cerr << d.dump() << "\n";
}

// ---------------------------------------------------------------------------
// Commands

struct CurveArgs {
    std::vector<double> c;
    double c_min = std::numeric_limits<double>::quiet_NaN();
    double c_max = std::numeric_limits<double>::quiet_NaN();
    double step = std::numeric_limits<double>::quiet_NaN();
    std::string output;
};

void add_curve_options(CLI::App* cmd, CurveArgs& a) {
    cmd->add_option("--c", a.c, "Explicit c values (> 1/2, increasing); overrides the grid");
    cmd->add_option("--c-min", a.c_min, "Grid start (default grid: c = 0.505..2.5, step 0.005)");
    cmd->add_option("--c-max", a.c_max, "Grid end");
    cmd->add_option("--step", a.step, "Grid step (> 0)");
    cmd->add_option("-o,--output", a.output, "Output file (default: stdout)");
}

int cmd_cdf(const CurveArgs& a, bool residue_tail, int n_max, const std::string& cache_dir) {
    const auto cs = c_values(a.c, a.c_min, a.c_max, a.step);
    std::optional<PoleCache> cache;
    if (residue_tail) cache.emplace(cache_directory(cache_dir));
    Sink sink(a.output);
    auto& out = sink.out();
    out << "c,cdf,abs_err_est" << (residue_tail ? ",residue_tail" : "") << "\n";
    for (double c : cs) {
        const auto r = cdf_with_error(c);
        out << fmt17(c) << ',' << fmt17(r.value) << ',' << fmt17(r.err_estimate);
        if (residue_tail) out << ',' << fmt17(prob_tail_residue(c, n_max, &*cache));
        out << "\n";
    }
    return kExitOk;
}

int cmd_density(const CurveArgs& a, const std::string& method, int n_max, const std::string& cache_dir) {
    const auto cs = c_values(a.c, a.c_min, a.c_max, a.step);
    if (n_max < 1) throw UsageError("--n-max must be positive");
    const bool want_residue = method != "quadrature", want_quad = method != "residue";
    CurveTable residue, quad;
    if (want_residue) {
        PoleCache cache(cache_directory(cache_dir));
        residue = density_residue_curve(cs, n_max, &cache);
    }
    if (want_quad) quad = density_curve(cs);
    Sink sink(a.output);
    auto& out = sink.out();
    out << "c,f_c,method,abs_err_est" << (method == "both" ? ",discrepancy" : "") << "\n";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        out << fmt17(cs[i]) << ',';
        if (method == "both") {
            const double err = std::max(residue.err_estimates[i], quad.err_estimates[i]);
            out << fmt17(residue.values[i]) << ",both," << fmt17(err) << ','
                << fmt17(std::abs(residue.values[i] - quad.values[i]));
        } else {
            const CurveTable& t = want_residue ? residue : quad;
            out << fmt17(t.values[i]) << ',' << method << ',' << fmt17(t.err_estimates[i]);
        }
        out << "\n";
    }
    return kExitOk;
}

int cmd_poles(double a, int n_max, const std::vector<double>& sweep, const std::string& output,
              const std::string& cache_dir) {
    if (n_max < 0) throw UsageError("--n-max must be nonnegative");
    std::vector<PoleTable> tables;
    if (!sweep.empty()) {
        const auto as = make_grid(sweep[0], sweep[1], sweep[2]);
        for (double x : as)
            if (!(x > 1)) throw UsageError("sweep values of a must exceed 1");
        tables = sweep_pole_tables(as, n_max);
    } else {
        if (!(a > 1)) throw UsageError("--a must exceed 1");
        PoleCache cache(cache_directory(cache_dir));
        tables.push_back(cache.get(a, n_max));
    }
    Sink sink(output);
    write_pole_csv(sink.out(), tables);
    return kExitOk;
}

int cmd_montecarlo(std::uint32_t samples, std::uint64_t seed, double intensity, const std::vector<double>& grid,
                   unsigned threads, const std::string& output) {
    if (samples < 1) throw UsageError("--samples must be positive");
    MonteCarloConfig cfg;
    cfg.seed = seed;
    cfg.intensity = intensity;
    cfg.threads = threads;
    const auto cs = grid.empty() ? default_c_grid() : make_grid(grid[0], grid[1], grid[2]);
    for (double c : cs)
        if (!(c > 0.5)) throw UsageError("grid values must exceed 1/2");
    const auto report = monte_carlo_report(samples, cfg, cs);
    Sink sink(output);
    sink.out() << to_json(report) << "\n";
    return kExitOk;
}

int cmd_sigma_lattice(const std::string& path, bool no_normalize, double tol, const std::string& output) {
    const std::string text = read_file(path);
    LatticeBasis basis = lattice_from_json(text);
    if (no_normalize) {
        if (!basis.normalized) throw UsageError("--no-normalize: basis determinant is not ±1");
    } else {
        basis = normalize_covolume(basis);
    }
    json j;
    j["dimension"] = basis.dimension;
    try {
        const auto r = sigma_tilde(basis, tol);
        j["sigma_tilde"] = r.sigma_tilde;
        j["m_L"] = r.m_L;
        j["shells_used"] = r.shells_used;
        j["radius"] = r.radius;
        j["radius_rounds"] = r.radius_rounds;
        j["last_change"] = r.last_change;
        j["status"] = "ok";
    } catch (const MultipleMinimaError& e) {
        // Several shortest pairs: no single dominant term, σ̃ = +∞.
        const auto spectrum = enumerate_shells(basis, shortest_vector_length(basis));
        j["sigma_tilde"] = "inf";
        j["m_L"] = spectrum.m_L;
        j["shells_used"] = 1;
        j["radius"] = spectrum.cutoff_radius;
        j["radius_rounds"] = 0;
        j["minimal_pairs"] = spectrum.shells.front().primitive_pair_count;
        j["status"] = "MultipleMinima";
        j["message"] = e.what();
    }
    Sink sink(output);
    sink.out() << j.dump(2) << "\n";
    return kExitOk;
}

struct NuArgs {
    int synthetic = 0;
    std::vector<double> exponents;
    std::string lattice;
    std::uint64_t poisson_seed = 0;
    bool poisson = false;
    int k = 6;
    double sigma_min = std::numeric_limits<double>::quiet_NaN();
    double sigma_max = std::numeric_limits<double>::quiet_NaN();
    double sigma_step = 0.05;
    std::optional<double> shift;
    std::optional<double> oracle_height;
    std::string output;
};

ExponentSequence nu_exponents(const NuArgs& a) {
    const int sources = (a.synthetic > 0) + !a.exponents.empty() + !a.lattice.empty() + a.poisson;
    if (sources > 1) throw UsageError("choose one exponent source");
    if (!a.exponents.empty()) {
        ExponentSequence e;
        e.lambdas = a.exponents;
        e.source = ExponentSource::synthetic;
        e.validate();
        return e;
    }
    if (!a.lattice.empty()) {
        const auto basis = normalize_covolume(lattice_from_json(read_file(a.lattice)));
        // Grow the radius until K shells are present.
        double radius = 2 * std::max(1.0, shortest_vector_length(basis));
        for (int round = 0; round < 40; ++round, radius *= 1.5) {
            const auto spectrum = enumerate_shells(basis, radius);
            if (int(spectrum.shells.size()) >= a.k) return lattice_exponents(spectrum, a.k);
        }
        throw DegenerateSpectrumError("could not collect enough shells");
    }
    if (a.poisson) {
        const auto real = sample_poisson(1.0, 4.0 * a.k + 32, a.poisson_seed, 0);
        return exponents_from_points(real.points, a.k);
    }
    return log_integer_exponents(a.synthetic > 0 ? a.synthetic : a.k);
}

int cmd_nu(const NuArgs& a) {
    const auto e = nu_exponents(a);
    if (e.size() < 5) throw UsageError("nu needs at least 5 exponents");
    const auto [strip_lo, strip_hi] = zero_strip(e);
    const double lo = std::isnan(a.sigma_min) ? strip_lo - 0.25 : a.sigma_min;
    const double hi = std::isnan(a.sigma_max) ? strip_hi + 0.25 : a.sigma_max;
    const auto grid = make_grid(lo, hi, a.sigma_step);
    const auto curve = nu_curve(e, grid);
    {
        Sink sink(a.output);
        auto& out = sink.out();
        out << "sigma,nu,err_estimate\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            out << fmt17(curve.abscissae[i]) << ',' << fmt17(curve.values[i]) << ',' << fmt17(curve.err_estimates[i])
                << "\n";
    }
    if (a.shift) {
        ExponentSequence shifted = e;
        for (double& l : shifted.lambdas) l += *a.shift;
        double worst = 0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, std::abs(nu_k(shifted, grid[i]) - curve.values[i]));
        json j;
        j["check"] = "shift";
        j["alpha"] = *a.shift;
        j["max_residual"] = worst;
        j["pass"] = worst < 1e-6;
        std::cerr << j.dump() << "\n";
    }
    if (a.oracle_height) {
        if (!(*a.oracle_height > 0)) throw UsageError("--oracle-height must be positive");
        const auto h = h_frequency(e, lo, hi);
        const auto z = count_zeros_rectangle(e, lo, hi, 0, *a.oracle_height);
        const double freq = double(z.count) / *a.oracle_height;
        json j;
        j["check"] = "zero_frequency";
        j["sigma1"] = lo;
        j["sigma2"] = hi;
        j["height"] = *a.oracle_height;
        j["count"] = z.count;
        j["winding_residual"] = z.winding_residual;
        j["frequency"] = freq;
        j["integral_nu"] = h.value;
        j["relative_difference"] = h.value > 0 ? std::abs(freq / h.value - 1) : std::abs(freq);
        std::cerr << j.dump() << "\n";
    }
    return kExitOk;
}

int cmd_constants(const std::string& output) {
    const auto k2 = constant_k2();
    const auto k1 = constant_k1();
    json j;
    j["K1"] = k1.value;
    j["K2"] = k2.value;
    j["err_estimates"] = {{"K1", k1.err_estimate}, {"K2", k2.err_estimate}};
    Sink sink(output);
    sink.out() << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zerofree: law of the zero-free abscissa of random Dirichlet series"};
    app.require_subcommand(1);
    std::string cache_dir;
    app.add_option("--cache-dir", cache_dir, "Pole cache directory (default: $ZEROFREE_CACHE_DIR or .zerofree-cache)");

    CurveArgs cdf_args;
    bool residue_tail = false;
    int cdf_n_max = kDefaultPoleCount;
    auto* cdf_cmd = app.add_subcommand("cdf", "Prob(sigma <= c) by oscillatory quadrature (CSV c,cdf,abs_err_est)");
    add_curve_options(cdf_cmd, cdf_args);
    cdf_cmd->add_flag("--residue-tail", residue_tail, "Append the residue-series tail P(sigma > c)");
    cdf_cmd->add_option("--n-max", cdf_n_max, "Residue truncation |n| <= N")->capture_default_str();

    CurveArgs density_args;
    std::string method = "residue";
    int density_n_max = kDefaultPoleCount;
    auto* density_cmd = app.add_subcommand("density", "Density f(c) (CSV c,f_c,method,abs_err_est)");
    add_curve_options(density_cmd, density_args);
    density_cmd->add_option("--method", method, "residue | quadrature | both (both adds a discrepancy column)")
        ->check(CLI::IsMember({"residue", "quadrature", "both"}))
        ->capture_default_str();
    density_cmd->add_option("--n-max", density_n_max, "Residue truncation |n| <= N")->capture_default_str();

    double pole_a = 2;
    int pole_n_max = kDefaultPoleCount;
    std::vector<double> sweep;
    std::string poles_output;
    auto* poles_cmd = app.add_subcommand("poles", "Poles of Psi_a (CSV a,n,re_zeta,im_zeta,re_dzeta_da,im_dzeta_da,residual)");
    poles_cmd->add_option("--a", pole_a, "Exponent a > 1")->capture_default_str();
    poles_cmd->add_option("--n-max", pole_n_max, "Largest pole index")->capture_default_str();
    poles_cmd->add_option("--sweep", sweep, "a_min a_max step: trajectories along an a-grid")->expected(3);
    poles_cmd->add_option("-o,--output", poles_output, "Output file (default: stdout)");

    std::uint32_t samples = 200000;
    std::uint64_t seed = 42;
    double intensity = 1;
    std::vector<double> mc_grid;
    unsigned threads = 0;
    std::string mc_output;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Empirical law of sigma from Poisson realizations (JSON report)");
    mc_cmd->add_option("--samples", samples, "Number of realizations")->capture_default_str();
    mc_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    mc_cmd->add_option("--intensity", intensity, "Poisson intensity (the law of sigma does not depend on it)")
        ->capture_default_str();
    mc_cmd->add_option("--grid", mc_grid, "c_min c_max step (default: c = 0.505..2.5, step 0.005)")->expected(3);
    mc_cmd->add_option("--threads", threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
    mc_cmd->add_option("-o,--output", mc_output, "Output file (default: stdout)");

    std::string lattice_file, lattice_output;
    bool no_normalize = false;
    double lattice_tol = 1e-10;
    auto* lattice_cmd = app.add_subcommand("sigma-lattice", "Abscissa sigma~ of a lattice (JSON)");
    lattice_cmd->add_option("file", lattice_file, "JSON {\"dimension\": n, \"basis\": [[...], ...]}")->required();
    lattice_cmd->add_flag("--no-normalize", no_normalize, "Use the basis as given (requires |det| = 1)");
    lattice_cmd->add_option("--tol", lattice_tol, "Root stability under radius growth")->capture_default_str();
    lattice_cmd->add_option("-o,--output", lattice_output, "Output file (default: stdout)");

    NuArgs nu_args;
    double shift = 0, oracle_height = 0;
    auto* nu_cmd = app.add_subcommand("nu", "Jessen zero density nu^(K) (CSV sigma,nu,err_estimate)");
    nu_cmd->add_option("--synthetic", nu_args.synthetic, "lambda_j = 2 log j for j = 1..K");
    nu_cmd->add_option("--exponents", nu_args.exponents, "Explicit increasing exponents");
    nu_cmd->add_option("--lattice", nu_args.lattice, "Lattice JSON: lambda_j = 2 log|v_j| over the first K shells");
    auto* poisson_opt = nu_cmd->add_option("--poisson", nu_args.poisson_seed,
                                           "Seed: lambda_j = 2 log T_j from a unit-intensity Poisson process");
    nu_cmd->add_option("-k,--k", nu_args.k, "Number of exponents for lattice/Poisson sources")->capture_default_str();
    nu_cmd->add_option("--sigma-min", nu_args.sigma_min, "Grid start (default: zero strip - 0.25)");
    nu_cmd->add_option("--sigma-max", nu_args.sigma_max, "Grid end (default: zero strip + 0.25)");
    nu_cmd->add_option("--sigma-step", nu_args.sigma_step, "Grid step")->capture_default_str();
    auto* shift_opt = nu_cmd->add_option("--check-shift", shift, "Report max |nu(lambda + alpha) - nu(lambda)| on stderr");
    auto* oracle_opt = nu_cmd->add_option("--oracle-height", oracle_height,
                                          "Report argument-principle zero frequency vs integral of nu on stderr");
    nu_cmd->add_option("-o,--output", nu_args.output, "Output file (default: stdout)");

    std::string constants_output;
    auto* constants_cmd = app.add_subcommand("constants", "Constants K1 and K2 of the density asymptotics (JSON)");
    constants_cmd->add_option("-o,--output", constants_output, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "cdf") return cmd_cdf(cdf_args, residue_tail, cdf_n_max, cache_dir);
        if (command == "density") return cmd_density(density_args, method, density_n_max, cache_dir);
        if (command == "poles") return cmd_poles(pole_a, pole_n_max, sweep, poles_output, cache_dir);
        if (command == "montecarlo") return cmd_montecarlo(samples, seed, intensity, mc_grid, threads, mc_output);
        if (command == "sigma-lattice") return cmd_sigma_lattice(lattice_file, no_normalize, lattice_tol, lattice_output);
        if (command == "nu") {
            nu_args.poisson = poisson_opt->count() > 0;
            if (shift_opt->count()) nu_args.shift = shift;
            if (oracle_opt->count()) nu_args.oracle_height = oracle_height;
            return cmd_nu(nu_args);
        }
        if (command == "constants") return cmd_constants(constants_output);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        // Arguments outside a function's domain are input errors.
        report_failure(e, command);
        return kExitUsage;
    } catch (const std::exception& e) {
        report_failure(e, command);
        return kExitNumeric;
    }
    return kExitUsage;
}
