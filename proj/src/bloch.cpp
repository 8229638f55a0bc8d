#include "magbloch/bloch.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "magbloch/angles.hpp"
#include "magbloch/errors.hpp"

namespace magbloch {

namespace {

void require_periodic_match(const Supercell& supercell, const BlochBasis& basis) {
  if (supercell.spec.boundary != Boundary::periodic)
    throw Error(ErrorKind::invariant, "the Bloch transform needs a periodic supercell");
  if (supercell.spec.sizes != basis.sizes())
    throw Error(ErrorKind::invariant, "Bloch basis and supercell sizes differ");
}

SupercellSpec periodic(std::span<const std::size_t> sizes) {
  return {std::vector<std::size_t>(sizes.begin(), sizes.end()), Boundary::periodic};
}

}  // namespace

CVector bloch_transform(const CVector& state, const Supercell& supercell, const BlochBasis& basis) {
  require_periodic_match(supercell, basis);
  return bloch_transform_fast(state, basis, supercell.base_vertex_count);
}

std::vector<CVector> fiber_components(const CVector& stacked, std::size_t base_vertices) {
  if (base_vertices == 0 || static_cast<std::size_t>(stacked.size()) % base_vertices != 0)
    throw Error(ErrorKind::invariant, "stacked vector does not split into fibers");
  std::vector<CVector> out;
  for (Eigen::Index start = 0; start < stacked.size(); start += static_cast<Eigen::Index>(base_vertices))
    out.emplace_back(stacked.segment(start, static_cast<Eigen::Index>(base_vertices)));
  return out;
}

CVector inverse_bloch_transform(const CVector& stacked, const Supercell& supercell, const BlochBasis& basis) {
  require_periodic_match(supercell, basis);
  const std::size_t cells = basis.size();
  const std::size_t nv = supercell.base_vertex_count;
  if (static_cast<std::size_t>(stacked.size()) != cells * nv)
    throw Error(ErrorKind::invariant, "stacked vector does not match the Bloch basis");
  const double scale = 1.0 / std::sqrt(static_cast<double>(cells));
  CVector out = CVector::Zero(stacked.size());
  for (std::size_t g = 0; g < cells; ++g)
    for (std::size_t k = 0; k < cells; ++k) {
      const std::complex<double> phase = basis.character(k, g) * scale;
      for (std::size_t v = 0; v < nv; ++v)
        out(static_cast<Eigen::Index>(g * nv + v)) += phase * stacked(static_cast<Eigen::Index>(k * nv + v));
    }
  return out;
}

CharacterRelationResiduals character_relations_check(std::span<const std::size_t> sizes) {
  return character_relation_residuals(BlochBasis({sizes.begin(), sizes.end()}));
}

BlockDiagonalizationReport verify_block_diagonalization(const Complex2& complex, const CoveringData& covering,
                                                        const Connection& connection,
                                                        std::span<const std::size_t> sizes) {
  const BlochBasis basis({sizes.begin(), sizes.end()});
  const Supercell sc = build_supercell(complex, covering, periodic(sizes));
  const std::size_t nv = complex.vertex_count;
  const CMatrix h = assemble_quotient(sc.complex, lift_connection(connection, sc)).matrix;
  const CMatrix phi = bloch_matrix(basis, nv);
  const auto n = phi.rows();

  BlockDiagonalizationReport report;
  report.blocks = basis.size();
  report.dimension = static_cast<std::size_t>(n);
  if (n == 0) return report;
  report.unitarity = (phi.adjoint() * phi - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();

  const CMatrix blocks = phi * h * phi.adjoint();
  const auto bv = static_cast<Eigen::Index>(nv);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k) * bv;
    for (std::size_t kp = 0; kp < basis.size(); ++kp) {
      const auto col = static_cast<Eigen::Index>(kp) * bv;
      if (k != kp) {
        report.off_diagonal = std::max(report.off_diagonal, blocks.block(row, col, bv, bv).cwiseAbs().maxCoeff());
      } else {
        const CMatrix fiber = assemble_fiber(complex, covering, connection, basis.momentum(k)).matrix;
        report.diagonal_deviation =
            std::max(report.diagonal_deviation, (blocks.block(row, col, bv, bv) - fiber).cwiseAbs().maxCoeff());
      }
    }
  }
  return report;
}

DecompositionReport compare_supercell_to_fibers(const Complex2& complex, const CoveringData& covering,
                                                const Connection& connection, std::span<const std::size_t> sizes,
                                                Execution execution) {
  const BlochBasis basis({sizes.begin(), sizes.end()});
  DecompositionReport report;
  report.supercell_eigenvalues = eigenvalues(assemble_supercell(complex, covering, connection, periodic(sizes)).matrix);
  for (const auto& ev : fiber_sweep(complex, covering, connection, basis.momenta(), execution))
    report.fiber_eigenvalues.insert(report.fiber_eigenvalues.end(), ev.begin(), ev.end());
  std::sort(report.fiber_eigenvalues.begin(), report.fiber_eigenvalues.end());
  report.max_deviation = spectral_distance(report.supercell_eigenvalues, report.fiber_eigenvalues);
  for (double x : report.supercell_eigenvalues) report.norm = std::max(report.norm, std::abs(x));
  return report;
}

CVector multiplier_action(std::span<const std::complex<double>> coefficients, const CVector& state,
                          const Supercell& supercell) {
  const LatticeIndexer& cells = supercell.cells;
  if (coefficients.size() != cells.size()) throw Error(ErrorKind::invariant, "one coefficient per cell is required");
  CVector out = CVector::Zero(state.size());
  for (std::size_t g = 0; g < cells.size(); ++g) {
    IntVector minus = cells.cell(g);
    for (auto& x : minus) x = -x;
    const std::complex<double> c = coefficients[cells.index(minus)];
    if (c == std::complex<double>(0.0, 0.0)) continue;
    out += c * translate(state, cells.cell(g), supercell);
  }
  return out;
}

std::complex<double> multiplier_symbol(std::span<const std::complex<double>> coefficients, const BlochBasis& basis,
                                       std::size_t k_index) {
  if (coefficients.size() != basis.size()) throw Error(ErrorKind::invariant, "one coefficient per cell is required");
  std::complex<double> sum(0.0, 0.0);
  for (std::size_t g = 0; g < basis.size(); ++g) sum += coefficients[g] * basis.character(k_index, g);
  return sum;
}

Character deck_character(const HomologySummary& summary, const CoveringData& covering,
                         std::span<const double> momentum) {
  if (momentum.size() != covering.rank) throw Error(ErrorKind::invariant, "momentum has the wrong rank");
  auto pullback = [&](const IntVector& cycle) {
    double angle = 0.0;
    for (std::size_t e = 0; e < cycle.size(); ++e)
      if (cycle[e] != 0)
        for (std::size_t j = 0; j < covering.rank; ++j)
          angle += static_cast<double>(cycle[e] * covering.tau[e][j]) * momentum[j];
    return angle;
  };
  std::vector<double> angles;
  for (const auto& z : summary.free_generators) angles.push_back(pullback(z));
  return make_character(summary, std::move(angles));
}

double lipschitz_bound(const Complex2& complex, const CoveringData& covering) {
  double bound = 0.0;
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    double norm = 0.0;
    for (auto x : covering.tau.at(e)) norm += std::abs(static_cast<double>(x));
    bound += 2.0 * complex.edges[e].weight * norm;
  }
  return bound;
}

std::vector<Interval> band_intervals(const std::vector<std::vector<double>>& eigenvalues, double join_gap) {
  // The j-th ordered eigenvalue is continuous on the connected momentum torus,
  // so each band is one interval; only distinct bands can leave gaps.
  std::vector<Interval> pieces;
  const std::size_t bands = eigenvalues.empty() ? 0 : eigenvalues.front().size();
  for (std::size_t b = 0; b < bands; ++b) {
    Interval hull{eigenvalues.front().at(b), eigenvalues.front().at(b)};
    for (const auto& ev : eigenvalues) {
      hull.lo = std::min(hull.lo, ev.at(b));
      hull.hi = std::max(hull.hi, ev.at(b));
    }
    pieces.push_back(hull);
  }
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> merged;
  for (const auto& piece : pieces) {
    if (!merged.empty() && piece.lo <= merged.back().hi + join_gap)
      merged.back().hi = std::max(merged.back().hi, piece.hi);
    else
      merged.push_back(piece);
  }
  return merged;
}

BandData spectrum_union(const Complex2& complex, const CoveringData& covering, const Connection& connection,
                        std::span<const std::size_t> grid, Execution execution) {
  if (grid.size() != covering.rank)
    throw Error(ErrorKind::invariant, fmt::format("grid has {} sizes, cover has rank {}", grid.size(), covering.rank));
  const BlochBasis basis({grid.begin(), grid.end()});
  BandData data;
  data.momenta = basis.momenta();
  data.eigenvalues = fiber_sweep(complex, covering, connection, data.momenta, execution);
  double step = 0.0;
  for (auto g : grid) step = std::max(step, two_pi / static_cast<double>(g));
  data.intervals = band_intervals(data.eigenvalues, band_touch);
  data.edge_uncertainty = 0.5 * lipschitz_bound(complex, covering) * step;
  return data;
}

Rational Rational::make(std::int64_t p, std::int64_t q) {
  if (q == 0) throw Error(ErrorKind::invariant, "flux denominator must be nonzero");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  return {p / g, q / g};
}

Rational Rational::parse(const std::string& text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty())
      throw Error(ErrorKind::parse, "cannot parse flux '" + text + "' as p/q");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return make(parse_int(text), 1);
  return make(parse_int(std::string_view(text).substr(0, slash)), parse_int(std::string_view(text).substr(slash + 1)));
}

Rational Rational::approximate(double value, std::int64_t max_denominator) {
  if (std::isfinite(value))
    for (std::int64_t q = 1; q <= max_denominator; ++q) {
      const double p = std::round(value * static_cast<double>(q));
      if (std::abs(p / static_cast<double>(q) - value) <= 1e-12) return make(static_cast<std::int64_t>(p), q);
    }
  throw Error(ErrorKind::invariant, fmt::format("irrational flux: {} has no p/q with q <= {}", value, max_denominator));
}

MagneticCell magnetic_supercell(const Complex2& complex, const CoveringData& covering, const FluxForm& base_flux,
                                Rational flux, std::size_t axis, std::span<const std::size_t> faces) {
  if (covering.rank == 0 || axis >= covering.rank)
    throw Error(ErrorKind::invariant, fmt::format("axis out of range: {} (cover rank {})", axis, covering.rank));
  flux = Rational::make(flux.p, flux.q);
  if (!base_flux.flux.empty() && base_flux.flux.size() != complex.face_count())
    throw Error(ErrorKind::invariant, "base flux does not match the face count");

  std::vector<bool> designated(complex.face_count(), faces.empty());
  for (auto f : faces) designated.at(f) = true;

  SupercellSpec spec{std::vector<std::size_t>(covering.rank, 1), Boundary::periodic};
  spec.sizes[axis] = static_cast<std::size_t>(flux.q);

  MagneticCell cell;
  cell.enlargement = build_supercell(complex, covering, spec);
  cell.complex = cell.enlargement.complex;
  cell.covering = cell.enlargement.covering;
  const double per_face = two_pi * flux.value();
  for (auto origin : cell.enlargement.face_origin)
    cell.flux.flux.push_back(designated[origin] ? per_face : (base_flux.flux.empty() ? 0.0 : base_flux.flux[origin]));

  const QuantizabilityCertificate cert = is_quantizable(cell.complex, cell.flux, homology(cell.complex));
  if (!cert.verdict)
    throw Error(ErrorKind::not_quantizable, fmt::format("flux {}/{} is not integral on the enlarged cell", flux.p, flux.q));
  return cell;
}

std::vector<ButterflyRow> butterfly(const Complex2& complex, const CoveringData& covering, const FluxForm& base_flux,
                                    std::span<const Rational> fluxes, std::span<const std::size_t> grid,
                                    const ButterflyOptions& options) {
  std::vector<ButterflyRow> rows;
  for (const Rational& raw : fluxes) {
    ButterflyRow row;
    row.flux = raw;
    try {
      row.flux = Rational::make(raw.p, raw.q);
      if (row.flux.q > options.max_denominator)
        throw Error(ErrorKind::invariant,
                    fmt::format("denominator {} exceeds the bound {}", row.flux.q, options.max_denominator));
      const MagneticCell cell =
          magnetic_supercell(complex, covering, base_flux, row.flux, options.axis, options.faces);
      const Connection connection = synthesize_connection(cell.complex, cell.flux, homology(cell.complex));
      row.intervals = spectrum_union(cell.complex, cell.covering, connection, grid, options.execution).intervals;
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace magbloch
