#pragma once

// Data-parallel kernels of the Bloch analysis. Each OpenMP kernel has a serial
// reference implementation that tests compare against; results are written to
// index-addressed slots so both paths produce identical output.

#include <cstddef>
#include <span>
#include <vector>

#include "magbloch/bloch_basis.hpp"
#include "magbloch/complex.hpp"
#include "magbloch/magnetic.hpp"
#include "magbloch/schroedinger.hpp"

namespace magbloch {

enum class Execution { serial, parallel };

/// Fiber eigenvalues (ascending) at each momentum.
std::vector<std::vector<double>> fiber_sweep(const Complex2& complex, const CoveringData& covering,
                                             const Connection& connection,
                                             const std::vector<std::vector<double>>& momenta,
                                             Execution execution = Execution::parallel);

/// Stacked Bloch transform, entry (k * V + v) = s~_k(v). Factorized per vertex.
CVector bloch_transform_fast(const CVector& state, const BlochBasis& basis, std::size_t base_vertices,
                             Execution execution = Execution::parallel);

/// Dense matrix of the Bloch transform, built term by term from the defining sum.
CMatrix bloch_matrix(const BlochBasis& basis, std::size_t base_vertices);

struct CharacterRelationResiduals {
  /// max_gamma | |N|^-1 sum_k chi_k(gamma) - [gamma = 0] |
  double over_characters = 0.0;
  /// max_{k,k'} | sum_gamma conj(chi_k(gamma)) chi_k'(gamma) - |N| [k = k'] |
  double over_group = 0.0;
};

CharacterRelationResiduals character_relation_residuals(const BlochBasis& basis,
                                                        Execution execution = Execution::parallel);

}  // namespace magbloch
