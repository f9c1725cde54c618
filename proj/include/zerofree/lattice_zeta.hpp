#pragma once
// Concrete lattices: covolume normalization, enumeration of primitive vectors
// grouped into shells, the truncated Epstein zeta function on the real axis,
// the abscissa σ̃_L solving m(L)^{-2σ} = Σ_{other primitive pairs} |v|^{-2σ},
// and Haar-distributed random lattices in dimension two.
//
// Vectors are rows of the basis matrix. Enumeration runs on an LLL-reduced
// basis with a Fincke–Pohst search; a unimodular change of basis preserves the
// gcd of integer coordinates, so primitivity is tested in reduced coordinates.

#include "zerofree/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace zerofree {

/// A full-rank lattice in R^n given by row basis vectors.
struct LatticeBasis {
    int dimension = 0;
    Eigen::MatrixXd rows;
    bool normalized = false;  ///< |det| = 1 (checked to 10⁻¹² by validate)

    /// Throws SingularBasisError / DomainError on shape, determinant or flag violations.
    void validate() const;
};

/// Basis from a row-major nested list (normalized flag computed from |det|).
LatticeBasis make_basis(const std::vector<std::vector<double>>& rows);

/// Rows scaled by |det|^{-1/n}.
LatticeBasis normalize_covolume(const LatticeBasis& basis);

/// LLL reduction (δ = 0.99) of the rows; spans the same lattice.
LatticeBasis lll_reduce(const LatticeBasis& basis, double delta = 0.99);

/// Primitive ±pairs of one length.
struct Shell {
    double length = 0;
    std::int64_t primitive_pair_count = 0;
};

/// Shells of primitive vector pairs up to a cutoff radius.
struct ShellSpectrum {
    std::vector<Shell> shells;  ///< strictly increasing lengths
    double m_L = 0;             ///< length of the shortest nonzero vector
    double cutoff_radius = 0;
    int dimension = 0;

    /// Throws DomainError unless lengths increase, counts are positive and m_L matches.
    void validate() const;
    /// Total number of primitive pairs.
    std::int64_t pair_count() const;
};

/// Relative tolerance under which two vector lengths fall into one shell.
inline constexpr double kShellMergeTolerance = 1e-9;

/// Default cap on the number of primitive pairs an enumeration may produce.
inline constexpr std::int64_t kMaxEnumeratedPairs = 40'000'000;

/// m(L): length of the shortest nonzero vector.
double shortest_vector_length(const LatticeBasis& basis);

/// All primitive pairs with |v| ≤ R (R is raised to m(L) if smaller).
/// ExplosionError when more than `max_pairs` pairs would be produced.
ShellSpectrum enumerate_shells(const LatticeBasis& basis, double radius,
                               std::int64_t max_pairs = kMaxEnumeratedPairs);

/// Every nonzero lattice vector (both signs) with |v| ≤ R, as integer coordinates
/// in the given basis; intended for small radii and brute-force comparisons.
std::vector<std::vector<std::int64_t>> enumerate_vectors(const LatticeBasis& basis, double radius,
                                                         std::int64_t max_vectors = kMaxEnumeratedPairs);

/// Riemann ζ(s) for real s > 1 (Euler–Maclaurin, ~10⁻¹⁵ relative).
double riemann_zeta(double s);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// A truncated lattice sum with its tail bound.
struct EpsteinResult {
    double value = 0;
    double tail_bound = 0;  ///< 2·n·V_n·R^{n-2σ}/(2σ-n)
    double radius = 0;
    std::int64_t pairs_used = 0;
};

/// Σ′ |v|^{-2σ} = 2 ζ(2σ) Σ_{primitive pairs} |v|^{-2σ} with the radius chosen so
/// that the tail bound is ≤ tol. DomainError for σ ≤ n/2; TailError when the
/// radius would need more than `max_pairs` pairs.
EpsteinResult epstein_zeta_real(const LatticeBasis& basis, double sigma, double tol = 1e-6,
                                std::int64_t max_pairs = kMaxEnumeratedPairs);

/// E_n(L, σ) for a covolume-one lattice by Riemann's theta splitting: incomplete
/// gamma sums over L and its dual L*, each converging like e^{-π|v|²}. The radius
/// grows until the value changes by ≤ tol relative; tail_bound is that change.
EpsteinResult epstein_zeta_theta(const LatticeBasis& basis, double sigma, double tol = 1e-14);

/// Same sum over a fixed spectrum (tail bound for its cutoff radius).
EpsteinResult epstein_zeta_from_shells(const ShellSpectrum& spectrum, double sigma);

/// α(σ) = 2 m^{-2σ} - Σ_{pairs} |v|^{-2σ} over the shells of a spectrum.
double alpha_function(const ShellSpectrum& spectrum, double sigma);

/// The abscissa σ̃_L and how it was reached.
struct SigmaTildeResult {
    double sigma_tilde = 0;
    double m_L = 0;
    std::int64_t shells_used = 0;
    double radius = 0;
    int radius_rounds = 0;
    double last_change = 0;  ///< |root(R_k) - root(R_{k-1})| at the accepted round
};

/// Root σ > n/2 of α(σ) = 2m^{-2σ} - E_n(L,σ)/(2ζ(2σ)), with E_n from the
/// theta-split sums truncated at radius R. R starts at max(3·m(L), 1) and grows by
/// 1.5 until successive roots differ by < tol (at most 8 rounds).
/// MultipleMinimaError when the shortest length carries more than one pair
/// (σ̃ = +∞); TailError if the radius loop does not settle.
SigmaTildeResult sigma_tilde(const LatticeBasis& basis, double tol = 1e-10);

/// The root of α with both theta sums truncated at a fixed radius.
double sigma_tilde_theta(const LatticeBasis& basis, double radius, double tol = 1e-14);

/// n·V_n·R^{n-2σ} / (2ζ(n)(2σ-n)): mean of Σ|v|^{-2σ} over primitive pairs beyond R
/// for a covolume-one lattice.
double primitive_tail_mean(int n, double sigma, double radius);

/// Root of α over the truncated primitive sum of one spectrum, optionally adding
/// the continuum tail beyond its cutoff radius (α is then strictly increasing
/// with a root just above n/2). Converges only algebraically in the radius; used
/// as an independent cross-check of sigma_tilde. NoRootError without a sign change.
double sigma_tilde_for_spectrum(const ShellSpectrum& spectrum, double tol = 1e-13, bool continuum_tail = false);

/// One draw from the Haar measure on unimodular 2D lattices.
struct RandomLattice2D {
    LatticeBasis basis;
    double x = 0;  ///< point x + iy of the standard fundamental domain
    double y = 0;
    int attempts = 0;  ///< rejection-sampling proposals used
};

/// Rejection sampling of z from {|x| ≤ 1/2, |z| ≥ 1} with density ∝ y^{-2};
/// basis [[y^{-1/2}, 0], [x y^{-1/2}, y^{1/2}]]. Deterministic in (seed, index).
RandomLattice2D random_lattice_2d_sample(std::uint64_t seed, std::uint32_t index = 0);
LatticeBasis random_lattice_2d(std::uint64_t seed, std::uint32_t index = 0);

/// JSON `{"dimension": n, "basis": [[...], ...]}` → basis (DomainError on schema errors).
LatticeBasis lattice_from_json(const std::string& text);

}  // namespace zerofree
