#pragma once

// Integer homology of a 2-complex and its character group Hom(H_1, S^1).

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "magbloch/complex.hpp"
#include "magbloch/integer_matrix.hpp"

namespace magbloch {

/// Homology groups H_0, H_1, H_2 with a fixed generator basis for H_1.
///
/// The H_1 generators and the coordinate maps are computed once per complex
/// and shared by characters, holonomies and twists, so angle coordinates mean
/// the same thing everywhere.
struct HomologySummary {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t face_count = 0;

  std::array<std::size_t, 3> betti{};
  std::array<IntVector, 3> torsion;

  /// 1-cycles generating the free part of H_1.
  std::vector<IntVector> free_generators;
  /// 1-cycles generating the torsion part; generator i has order torsion[1][i].
  std::vector<IntVector> torsion_generators;
  /// Z-basis of the 2-cycle lattice ker d2.
  std::vector<IntVector> two_cycles;

  /// Row i maps a 1-cycle to its coefficient on free generator i.
  std::vector<IntVector> free_coordinates;
  /// Row i maps a 1-cycle to its coefficient on torsion generator i (meaningful mod the order).
  std::vector<IntVector> torsion_coordinates;

  std::vector<std::pair<std::size_t, std::size_t>> edge_endpoints;

  long long euler_cells() const;
  long long euler_betti() const;
  bool is_cycle(std::span<const std::int64_t> chain) const;
};

HomologySummary homology(const Complex2& complex);

/// Coefficients of a 1-cycle on the free and torsion generators (torsion reduced mod order).
/// Throws Error(invariant) "not a cycle" if d1(chain) != 0.
struct CycleCoordinates {
  IntVector free;
  IntVector torsion;
};
CycleCoordinates cycle_coordinates(const HomologySummary& summary, std::span<const std::int64_t> chain);

/// How angle values passed to make_character are read.
enum class PhaseNormalization {
  radians,  // value v gives exp(i v) on the generator
  turns,    // value v gives exp(2 pi i v), the exp(2 pi i \int omega) form
};

/// Element of Hom(H_1, S^1): angles on free generators plus torsion roots of unity.
struct Character {
  std::vector<double> angles;
  IntVector torsion_indices;
  IntVector torsion_orders;

  bool is_trivial(double tol = 1e-9) const;
  bool approx_equal(const Character& other, double tol = 1e-9) const;
  /// Largest angular discrepancy on free generators (torsion compared exactly, +inf on mismatch).
  double distance(const Character& other) const;
};

Character trivial_character(const HomologySummary& summary);
Character make_character(const HomologySummary& summary, std::vector<double> values, IntVector torsion_indices = {},
                         PhaseNormalization normalization = PhaseNormalization::radians);

/// Pointwise product of characters on the same summary.
Character multiply(const Character& a, const Character& b);
Character inverse(const Character& a);

/// Phase of chi on a 1-cycle, in (-pi, pi].
double character_phase(const Character& chi, const HomologySummary& summary, std::span<const std::int64_t> cycle);
std::complex<double> evaluate_character(const Character& chi, const HomologySummary& summary,
                                        std::span<const std::int64_t> cycle);

/// Connected component of a character in H^1(M, S^1): its torsion indices.
IntVector component_of_character(const Character& chi);

class CharacterGroup {
 public:
  CharacterGroup(std::size_t free_rank, IntVector torsion) : free_rank_(free_rank), torsion_(std::move(torsion)) {}

  std::size_t free_rank() const { return free_rank_; }
  const IntVector& torsion() const { return torsion_; }
  std::size_t component_count() const;

  /// One representative per component (zero angles), lexicographic in the torsion indices.
  std::vector<Character> components() const;
  /// Angle grid 2 pi j / per_axis on the torus part, times every component.
  std::vector<Character> grid(std::size_t per_axis) const;
  /// Uniform samples of the torus part in the given component.
  std::vector<Character> sample_uniform(std::size_t count, std::uint64_t seed, const IntVector& component = {}) const;

 private:
  std::size_t free_rank_;
  IntVector torsion_;
};

CharacterGroup character_group(const HomologySummary& summary);

}  // namespace magbloch
