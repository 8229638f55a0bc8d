#include "magbloch/kernels.hpp"

#include <cmath>
#include <exception>

#include "magbloch/angles.hpp"
#include "magbloch/errors.hpp"

namespace magbloch {

BlochBasis::BlochBasis(std::vector<std::size_t> sizes) : lattice_(std::move(sizes)) {
  for (auto n : lattice_.sizes()) {
    std::vector<std::complex<double>> roots(n);
    for (std::size_t r = 0; r < n; ++r)
      roots[r] = r == 0 ? std::complex<double>(1.0, 0.0)
                        : std::polar(1.0, -two_pi * static_cast<double>(r) / static_cast<double>(n));
    roots_.push_back(std::move(roots));
  }
  cells_.reserve(lattice_.size());
  for (std::size_t i = 0; i < lattice_.size(); ++i) cells_.push_back(lattice_.cell(i));
}

std::vector<double> BlochBasis::momentum(std::size_t k_index) const {
  const IntVector m = lattice_.cell(k_index);
  std::vector<double> k(m.size());
  for (std::size_t j = 0; j < m.size(); ++j)
    k[j] = two_pi * static_cast<double>(m[j]) / static_cast<double>(lattice_.sizes()[j]);
  return k;
}

std::vector<std::vector<double>> BlochBasis::momenta() const {
  std::vector<std::vector<double>> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(momentum(i));
  return out;
}

std::complex<double> BlochBasis::character(std::size_t k_index, std::size_t cell_index) const {
  const IntVector& m = cells_[k_index];
  const IntVector& g = cells_[cell_index];
  std::complex<double> value(1.0, 0.0);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto n = static_cast<std::int64_t>(lattice_.sizes()[j]);
    const std::int64_t r = (m[j] * g[j]) % n;
    if (r != 0) value *= roots_[j][static_cast<std::size_t>(r)];
  }
  return value;
}

namespace {

// Runs body(i) for i in [0, n), forwarding the first exception out of the parallel region.
template <class Body>
void for_each_index(std::size_t n, Execution execution, Body&& body) {
  if (execution == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(magbloch_kernel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<std::vector<double>> fiber_sweep(const Complex2& complex, const CoveringData& covering,
                                             const Connection& connection,
                                             const std::vector<std::vector<double>>& momenta, Execution execution) {
  std::vector<std::vector<double>> out(momenta.size());
  for_each_index(momenta.size(), execution, [&](std::size_t i) {
    out[i] = eigenvalues(assemble_fiber(complex, covering, connection, momenta[i]).matrix);
  });
  return out;
}

CVector bloch_transform_fast(const CVector& state, const BlochBasis& basis, std::size_t base_vertices,
                             Execution execution) {
  const std::size_t cells = basis.size();
  if (static_cast<std::size_t>(state.size()) != cells * base_vertices)
    throw Error(ErrorKind::invariant, "state does not match the Bloch basis");
  const double scale = 1.0 / std::sqrt(static_cast<double>(cells));
  CVector out = CVector::Zero(state.size());
  for_each_index(cells, execution, [&](std::size_t k) {
    for (std::size_t g = 0; g < cells; ++g) {
      const std::complex<double> phase = std::conj(basis.character(k, g)) * scale;
      for (std::size_t v = 0; v < base_vertices; ++v)
        out(static_cast<Eigen::Index>(k * base_vertices + v)) +=
            phase * state(static_cast<Eigen::Index>(g * base_vertices + v));
    }
  });
  return out;
}

CMatrix bloch_matrix(const BlochBasis& basis, std::size_t base_vertices) {
  const std::size_t cells = basis.size();
  const auto n = static_cast<Eigen::Index>(cells * base_vertices);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cells));
  CMatrix phi = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < cells; ++k)
    for (std::size_t g = 0; g < cells; ++g) {
      // Term chi_k(gamma) s(gamma^{-1} x): gamma^{-1} maps the home cell to cell -gamma.
      IntVector minus = basis.lattice().cell(g);
      for (auto& x : minus) x = -x;
      const std::size_t source_cell = basis.lattice().index(minus);
      const std::complex<double> value = basis.character(k, g) * scale;
      for (std::size_t v = 0; v < base_vertices; ++v)
        phi(static_cast<Eigen::Index>(k * base_vertices + v),
            static_cast<Eigen::Index>(source_cell * base_vertices + v)) += value;
    }
  return phi;
}

CharacterRelationResiduals character_relation_residuals(const BlochBasis& basis, Execution execution) {
  const std::size_t n = basis.size();
  const double order = static_cast<double>(n);
  std::vector<double> per_gamma(n, 0.0);
  for_each_index(n, execution, [&](std::size_t g) {
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) sum += basis.character(k, g);
    per_gamma[g] = std::abs(sum / order - (g == 0 ? 1.0 : 0.0));
  });
  std::vector<double> per_k(n, 0.0);
  for_each_index(n, execution, [&](std::size_t k) {
    double worst = 0.0;
    for (std::size_t kp = 0; kp < n; ++kp) {
      std::complex<double> sum(0.0, 0.0);
      for (std::size_t g = 0; g < n; ++g) sum += std::conj(basis.character(k, g)) * basis.character(kp, g);
      worst = std::max(worst, std::abs(sum - (k == kp ? order : 0.0)));
    }
    per_k[k] = worst;
  });
  CharacterRelationResiduals out;
  for (double r : per_gamma) out.over_characters = std::max(out.over_characters, r);
  for (double r : per_k) out.over_group = std::max(out.over_group, r);
  return out;
}

}  // namespace magbloch
