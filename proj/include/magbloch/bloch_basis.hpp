#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "magbloch/complex.hpp"

namespace magbloch {

/// Finite sample of the dual torus of Z^d / N Z^d: momenta k_j = 2 pi m_j / N_j,
/// lexicographic in m (first axis slowest).
///
/// Sign conventions, fixed once for the whole library:
///   fiber at k        : edge phases theta_e + k . tau(e)
///   deck character    : chi_k(gamma) = exp(-i k . gamma)
///   Bloch transform   : s~_k(v) = |N|^{-1/2} sum_gamma chi_k(gamma) s(gamma^{-1} (0, v))
///                              = |N|^{-1/2} sum_gamma exp(i k . gamma) s(gamma, v)
/// With these choices Phi H Phi^dagger has the fiber at k as its k-th diagonal block.
class BlochBasis {
 public:
  explicit BlochBasis(std::vector<std::size_t> sizes);

  std::size_t size() const { return lattice_.size(); }
  std::size_t rank() const { return lattice_.rank(); }
  const std::vector<std::size_t>& sizes() const { return lattice_.sizes(); }
  const LatticeIndexer& lattice() const { return lattice_; }

  std::vector<double> momentum(std::size_t k_index) const;
  std::vector<std::vector<double>> momenta() const;

  /// chi_k(gamma), with the phase reduced exactly in integers before exponentiation.
  std::complex<double> character(std::size_t k_index, std::size_t cell_index) const;

 private:
  LatticeIndexer lattice_;
  std::vector<IntVector> cells_;
  std::vector<std::vector<std::complex<double>>> roots_;
};

}  // namespace magbloch
