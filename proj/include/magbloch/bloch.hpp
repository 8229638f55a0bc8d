#pragma once

// Finite Bloch theory for periodic magnetic operators: the Bloch transform of
// a periodic supercell, its block diagonalization into twisted fiber
// operators, band sweeps, and rational-flux (Hofstadter) workflows.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magbloch/bloch_basis.hpp"
#include "magbloch/complex.hpp"
#include "magbloch/homology.hpp"
#include "magbloch/kernels.hpp"
#include "magbloch/magnetic.hpp"
#include "magbloch/schroedinger.hpp"

namespace magbloch {

/// Stacked transform of a periodic-supercell state: entry (k * V + v) = s~_k(v).
CVector bloch_transform(const CVector& state, const Supercell& supercell, const BlochBasis& basis);
/// Split a stacked transform into one quotient vector per character.
std::vector<CVector> fiber_components(const CVector& stacked, std::size_t base_vertices);
/// Phi^dagger applied to stacked fiber vectors.
CVector inverse_bloch_transform(const CVector& stacked, const Supercell& supercell, const BlochBasis& basis);

/// Residuals of the finite orthogonality relations for Z^d / N Z^d.
CharacterRelationResiduals character_relations_check(std::span<const std::size_t> sizes);

struct BlockDiagonalizationReport {
  /// max |Phi^dagger Phi - I|
  double unitarity = 0.0;
  /// max entry of Phi H Phi^dagger outside the diagonal blocks
  double off_diagonal = 0.0;
  /// max entrywise gap between the k-th diagonal block and assemble_fiber(k)
  double diagonal_deviation = 0.0;
  std::size_t blocks = 0;
  std::size_t dimension = 0;
};

BlockDiagonalizationReport verify_block_diagonalization(const Complex2& complex, const CoveringData& covering,
                                                        const Connection& connection,
                                                        std::span<const std::size_t> sizes);

struct DecompositionReport {
  std::vector<double> supercell_eigenvalues;
  std::vector<double> fiber_eigenvalues;  // sorted union over the Bloch basis
  double max_deviation = 0.0;
  double norm = 0.0;
};

/// Sorted supercell spectrum against the sorted union of fiber spectra on the Bloch basis.
DecompositionReport compare_supercell_to_fibers(const Complex2& complex, const CoveringData& covering,
                                                const Connection& connection, std::span<const std::size_t> sizes,
                                                Execution execution = Execution::parallel);

/// M_f s = sum_gamma f^(gamma^{-1}) T_gamma s, with f^ indexed by supercell cell.
CVector multiplier_action(std::span<const std::complex<double>> coefficients, const CVector& state,
                          const Supercell& supercell);
/// Value of M_f on fiber k: sum_gamma f^(gamma) chi_k(gamma).
std::complex<double> multiplier_symbol(std::span<const std::complex<double>> coefficients, const BlochBasis& basis,
                                       std::size_t k_index);

/// Character on H_1 of the quotient pulled back from momentum k: angle k . tau(z) on each free generator.
Character deck_character(const HomologySummary& summary, const CoveringData& covering, std::span<const double> momentum);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct BandData {
  std::vector<std::vector<double>> momenta;
  std::vector<std::vector<double>> eigenvalues;
  std::vector<Interval> intervals;
  /// True band edges lie within this distance of the sampled ones (Lipschitz bound times half the grid step).
  double edge_uncertainty = 0.0;
};

/// Distinct bands closer than this are reported as one interval.
inline constexpr double band_touch = 1e-9;

/// Lipschitz constant of fiber eigenvalues in k (max norm): 2 sum_e w_e |tau(e)|_1.
double lipschitz_bound(const Complex2& complex, const CoveringData& covering);

/// Hull of each band over the samples, then merge hulls whose gap is at most `join_gap`.
std::vector<Interval> band_intervals(const std::vector<std::vector<double>>& eigenvalues, double join_gap);

/// Fiber spectra on the lexicographic grid k_j = 2 pi m_j / G_j, plus merged intervals.
BandData spectrum_union(const Complex2& complex, const CoveringData& covering, const Connection& connection,
                        std::span<const std::size_t> grid, Execution execution = Execution::parallel);

struct Rational {
  std::int64_t p = 0;
  std::int64_t q = 1;

  /// Lowest terms with q > 0.
  static Rational make(std::int64_t p, std::int64_t q);
  /// Parse "p/q" or "p".
  static Rational parse(const std::string& text);
  /// Closest p/q with q <= max_denominator within 1e-12, else Error(invariant) "irrational flux".
  static Rational approximate(double value, std::int64_t max_denominator);

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct MagneticCell {
  Complex2 complex;
  CoveringData covering;
  FluxForm flux;
  Supercell enlargement;
};

/// q-fold enlargement along `axis` with flux 2 pi p / q through every lift of
/// the designated faces (all faces when empty); other faces keep `base_flux`.
/// Throws Error(not_quantizable) if the enlarged cell still fails the integrality test.
MagneticCell magnetic_supercell(const Complex2& complex, const CoveringData& covering, const FluxForm& base_flux,
                                Rational flux, std::size_t axis = 0, std::span<const std::size_t> faces = {});

struct ButterflyRow {
  Rational flux;
  std::vector<Interval> intervals;
  std::string error;
};

struct ButterflyOptions {
  std::size_t axis = 0;
  std::int64_t max_denominator = 64;
  std::vector<std::size_t> faces;
  Execution execution = Execution::parallel;
};

/// For each flux: magnetic_supercell, synthesize_connection, spectrum_union. Per-entry errors are collected.
std::vector<ButterflyRow> butterfly(const Complex2& complex, const CoveringData& covering, const FluxForm& base_flux,
                                    std::span<const Rational> fluxes, std::span<const std::size_t> grid,
                                    const ButterflyOptions& options = {});

}  // namespace magbloch
