#pragma once
// Pole route to the law of σ: the poles ζ_n of Ψ_a(z) = e^{-iz} z^{-1} / η_a(z)
// in the lower half-plane, their a-derivatives, and the residue series
//
//   P(σ > c) = Σ_n a e^{-2iζ_n},   f(c) = 2 Σ_n e^{-2iζ_n} (2ai dζ_n/da - 1),   a = 2c,
//
// folded with the symmetry ζ_{-n} = -conj(ζ_n). Poles are refined by Newton in
// double precision and polished in 113-bit binary128 arithmetic, where the
// residual |η_a(ζ_n)| is measured; |η_a'| grows like e^{|Im ζ|}/|ζ|, so the
// double nearest to a pole cannot itself certify a 10⁻¹² residual.

#include "zerofree/limit_distribution.hpp"
#include "zerofree/special_functions.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace zerofree {

/// Version string mixed into cache keys; bump whenever pole values can change.
inline constexpr const char* kPoleAlgorithmVersion = "poles-v1";

/// Default truncation |n| ≤ 400 of the residue series.
inline constexpr int kDefaultPoleCount = 400;

/// One refined pole ζ_n(a) of Ψ_a.
struct PoleRecord {
    int n = 0;
    double a = 0;
    cplx zeta;
    cplx dzeta_da;
    double residual = 0;        ///< |η_a(ζ_n)| at the extended-precision root
    double guess_distance = 0;  ///< |ζ_n - asymptotic guess| (0 for n = 0)

    /// Throws StrayRootError / ConvergenceError when the record breaks the
    /// strip or residual invariants.
    void validate() const;
};

/// Poles ζ_0 … ζ_N for one value of a.
struct PoleTable {
    double a = 0;
    std::vector<PoleRecord> records;
    int n_max = 0;

    /// Throws PoleTableError unless records are complete, ordered and valid.
    void validate() const;
};

/// Sum of a residue series with its truncation estimate.
struct ResidueSum {
    double value = 0;
    double truncation_estimate = 0;
};

/// Residual threshold enforced on every pole.
inline constexpr double kPoleResidualTolerance = 1e-12;

/// Point c_n(x) = x - i x tan((n - 1/4)π - x/2) of the curve Γ_n, x ∈ ((2n-3/2)π, (2n-1/2)π].
cplx gamma_curve_point(int n, double x);

/// G = log|Γ(-1/a)| (> 1 for every a > 1).
double log_abs_gamma_neg_inv(double a);

/// Y_n: the root y > 0 of y - (1 + 1/a)/2 · log((2πn)² + y²) = log|Γ(-1/a)|.
double asymptotic_pole_height(double a, int n);

/// ζ̂_n = (2n - 1/a)π + (1 + 1/a) arctan(2πn / Y_n) - i Y_n (n ≥ 1).
cplx initial_pole_guess(double a, int n);

/// Newton refinement of the pole in strip S_n from `guess` (n ≥ 1).
PoleRecord refine_pole(double a, cplx guess, int n);

/// The n = 0 pole on the negative imaginary axis (bisection, then Newton).
PoleRecord refine_pole_zero(double a);

/// Pole n for one a: continuation from `warm` when given, the asymptotic guess otherwise.
PoleRecord find_pole(double a, int n, const std::optional<cplx>& warm = std::nullopt);

/// dζ_n/da = -(∂η_a/∂a) / (∂η_a/∂z) at the pole.
cplx dzeta_da(double a, const PoleRecord& record);

/// Poles 0..n_max for one a (optionally warm-started from a neighbouring table).
PoleTable compute_pole_table(double a, int n_max, const PoleTable* warm = nullptr);

/// Tables along an a-grid, each warm-started from its predecessor.
std::vector<PoleTable> sweep_pole_tables(const std::vector<double>& as, int n_max);

/// (1/2πi) ∮ Ψ_a over the circle |z - center| = radius (trapezoid rule).
cplx contour_residue(double a, cplx center, double radius = 1e-2, int points = 64);

/// |contour residue of Ψ_a at ζ_n - (-a e^{-2iζ_n})|; circle radius min(10⁻², |ζ_n|/2).
double residue_check(double a, const PoleRecord& record);

/// P(σ > c) from a pole table with a = 2c.
ResidueSum prob_tail_residue(const PoleTable& table, int n_max);
/// f(c) from a pole table with a = 2c.
ResidueSum density_residue(const PoleTable& table, int n_max);

/// Convenience forms that build (or load from `cache`) the pole table.
class PoleCache;
double prob_tail_residue(double c, int n_max = kDefaultPoleCount, PoleCache* cache = nullptr);
double density_residue(double c, int n_max = kDefaultPoleCount, PoleCache* cache = nullptr);

/// Residue density on a c-grid (continuation sweep in a = 2c).
CurveTable density_residue_curve(const std::vector<double>& cs, int n_max = kDefaultPoleCount,
                                 PoleCache* cache = nullptr);

/// Write / read the pole CSV `a,n,re_zeta,im_zeta,re_dzeta_da,im_dzeta_da,residual`
/// (17 significant digits, rows sorted by (a, n)).
void write_pole_csv(std::ostream& out, const std::vector<PoleTable>& tables);
std::vector<PoleTable> read_pole_csv(std::istream& in);

/// Content-addressed on-disk cache of pole tables keyed by (a, n_max, version).
class PoleCache {
public:
    explicit PoleCache(std::filesystem::path dir);

    /// Directory from ZEROFREE_CACHE_DIR, else ".zerofree-cache".
    static std::filesystem::path default_directory();

    std::filesystem::path path_for(double a, int n_max) const;
    std::optional<PoleTable> load(double a, int n_max) const;
    /// Atomic write (temporary file, then rename).
    void store(const PoleTable& table) const;
    /// Load, or compute and store.
    PoleTable get(double a, int n_max, const PoleTable* warm = nullptr) const;

    const std::filesystem::path& directory() const { return dir_; }

private:
    std::filesystem::path dir_;
};

}  // namespace zerofree
