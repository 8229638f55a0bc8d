#pragma once

// Magnetic Bochner Laplacian plus potential as a dense Hermitian matrix:
//
//   (H psi)(v) = sum_{e at v} w_e (psi(v) - exp(i theta_{e->v}) psi(other end)) + V(v) psi(v)
//
// where theta_{e->v} is the phase transporting into v: +theta_e into the
// edge's target, -theta_e into its source.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "magbloch/complex.hpp"
#include "magbloch/magnetic.hpp"

namespace magbloch {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class OperatorKind { quotient, fiber, supercell };

struct MagneticOperator {
  CMatrix matrix;
  OperatorKind kind = OperatorKind::quotient;
  /// Quasi-momentum of a fiber operator.
  std::vector<double> momentum;
  /// Supercell shape of a supercell operator.
  SupercellSpec supercell;

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct Spectrum {
  std::vector<double> eigenvalues;
  /// max_j |H v_j - lambda_j v_j|.
  double residual = 0.0;
  /// Spectral norm max_j |lambda_j|.
  double norm = 0.0;
};

inline constexpr std::size_t dense_limit = 2048;

MagneticOperator assemble_quotient(const Complex2& complex, const Connection& connection);

/// Quotient assembly with edge phases theta_e + k . tau(e).
MagneticOperator assemble_fiber(const Complex2& complex, const CoveringData& covering, const Connection& connection,
                                std::span<const double> momentum);

/// Assembly on the supercell of the cover with periodically copied phases, weights and potentials.
MagneticOperator assemble_supercell(const Complex2& complex, const CoveringData& covering,
                                    const Connection& connection, const SupercellSpec& spec);

/// Copies of the quotient phases on the supercell edges.
Connection lift_connection(const Connection& connection, const Supercell& supercell);

/// Full dense Hermitian eigendecomposition. Rejects matrices larger than `limit`
/// and matrices whose Hermitian defect exceeds 1e-10.
Spectrum spectrum(const MagneticOperator& op, std::size_t limit = dense_limit);

/// Eigenvalues only, ascending; no checks beyond size.
std::vector<double> eigenvalues(const CMatrix& matrix, std::size_t limit = dense_limit);

double hermitian_defect(const CMatrix& matrix);

/// Largest elementwise gap between two ascending eigenvalue lists (+inf on length mismatch).
double spectral_distance(std::span<const double> a, std::span<const double> b);

/// (T_gamma s)(delta, v) = s(delta - gamma, v) on a periodic supercell.
CVector translate(const CVector& state, std::span<const std::int64_t> shift, const Supercell& supercell);

}  // namespace magbloch
