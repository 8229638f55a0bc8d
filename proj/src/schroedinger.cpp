#include "magbloch/schroedinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "magbloch/errors.hpp"

namespace magbloch {

namespace {

void add_edge(CMatrix& h, std::size_t s, std::size_t t, double w, double phase) {
  const auto si = static_cast<Eigen::Index>(s);
  const auto ti = static_cast<Eigen::Index>(t);
  const std::complex<double> hop = w * std::polar(1.0, phase);
  h(ti, ti) += w;
  h(si, si) += w;
  h(ti, si) -= hop;
  h(si, ti) -= std::conj(hop);
}

CMatrix assemble(const Complex2& complex, std::span<const double> phases) {
  const auto n = static_cast<Eigen::Index>(complex.vertex_count);
  CMatrix h = CMatrix::Zero(n, n);
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    const Edge& edge = complex.edges[e];
    add_edge(h, edge.source, edge.target, edge.weight, phases[e]);
  }
  for (std::size_t v = 0; v < complex.vertex_count && v < complex.potential.size(); ++v)
    h(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)) += complex.potential[v];
  // Loop edges add exp(i t) + exp(-i t) on the diagonal; keep it exactly real.
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = h(i, i).real();
  return h;
}

void check_connection(const Complex2& complex, const Connection& connection) {
  if (connection.size() != complex.edge_count())
    throw Error(ErrorKind::invariant, fmt::format("connection has {} phases, complex has {} edges", connection.size(),
                                                  complex.edge_count()));
}

}  // namespace

MagneticOperator assemble_quotient(const Complex2& complex, const Connection& connection) {
  check_connection(complex, connection);
  MagneticOperator op;
  op.matrix = assemble(complex, connection.values());
  op.kind = OperatorKind::quotient;
  return op;
}

MagneticOperator assemble_fiber(const Complex2& complex, const CoveringData& covering, const Connection& connection,
                                std::span<const double> momentum) {
  check_connection(complex, connection);
  if (momentum.size() != covering.rank)
    throw Error(ErrorKind::invariant,
                fmt::format("momentum has {} components, cover has rank {}", momentum.size(), covering.rank));
  if (covering.tau.size() != complex.edge_count())
    throw Error(ErrorKind::invariant, "covering labels do not match the edge count");
  std::vector<double> phases(connection.values());
  for (std::size_t e = 0; e < phases.size(); ++e)
    for (std::size_t j = 0; j < covering.rank; ++j) phases[e] += momentum[j] * static_cast<double>(covering.tau[e][j]);
  MagneticOperator op;
  op.matrix = assemble(complex, phases);
  op.kind = OperatorKind::fiber;
  op.momentum.assign(momentum.begin(), momentum.end());
  return op;
}

Connection lift_connection(const Connection& connection, const Supercell& supercell) {
  std::vector<double> theta;
  theta.reserve(supercell.edge_origin.size());
  for (auto e : supercell.edge_origin) theta.push_back(connection.theta(e));
  return Connection(std::move(theta));
}

MagneticOperator assemble_supercell(const Complex2& complex, const CoveringData& covering,
                                    const Connection& connection, const SupercellSpec& spec) {
  check_connection(complex, connection);
  const Supercell sc = build_supercell(complex, covering, spec);
  MagneticOperator op;
  op.matrix = assemble(sc.complex, lift_connection(connection, sc).values());
  if (spec.boundary == Boundary::dirichlet) {
    // psi = 0 outside the box: an edge leaving it still contributes w_e to the diagonal at its inside end.
    const auto sizes = sc.cells.sizes();
    const auto inside = [&](const IntVector& cell) {
      for (std::size_t j = 0; j < cell.size(); ++j)
        if (cell[j] < 0 || cell[j] >= static_cast<std::int64_t>(sizes[j])) return false;
      return true;
    };
    for (std::size_t c = 0; c < sc.cells.size(); ++c) {
      const IntVector here = sc.cells.cell(c);
      for (std::size_t e = 0; e < complex.edge_count(); ++e) {
        const Edge& edge = complex.edges[e];
        IntVector ahead = here, behind = here;
        for (std::size_t j = 0; j < here.size(); ++j) {
          ahead[j] += covering.tau[e][j];
          behind[j] -= covering.tau[e][j];
        }
        const auto s = static_cast<Eigen::Index>(sc.vertex(c, edge.source));
        const auto t = static_cast<Eigen::Index>(sc.vertex(c, edge.target));
        if (!inside(ahead)) op.matrix(s, s) += edge.weight;
        if (!inside(behind)) op.matrix(t, t) += edge.weight;
      }
    }
  }
  op.kind = OperatorKind::supercell;
  op.supercell = spec;
  return op;
}

double hermitian_defect(const CMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) return std::numeric_limits<double>::infinity();
  if (matrix.size() == 0) return 0.0;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> eigenvalues(const CMatrix& matrix, std::size_t limit) {
  if (static_cast<std::size_t>(matrix.rows()) > limit)
    throw Error(ErrorKind::numeric, fmt::format("matrix dimension {} exceeds the dense limit {}; reduce the supercell",
                                                matrix.rows(), limit));
  if (matrix.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Spectrum spectrum(const MagneticOperator& op, std::size_t limit) {
  const CMatrix& h = op.matrix;
  if (static_cast<std::size_t>(h.rows()) > limit)
    throw Error(ErrorKind::numeric, fmt::format("matrix dimension {} exceeds the dense limit {}; reduce the supercell",
                                                h.rows(), limit));
  const double defect = hermitian_defect(h);
  if (!(defect <= 1e-10)) throw Error(ErrorKind::numeric, fmt::format("not Hermitian: defect {:.3e}", defect));
  Spectrum out;
  if (h.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  const CMatrix r = h * solver.eigenvectors() - solver.eigenvectors() * ev.asDiagonal();
  for (Eigen::Index j = 0; j < r.cols(); ++j) out.residual = std::max(out.residual, r.col(j).norm());
  out.norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return out;
}

double spectral_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

CVector translate(const CVector& state, std::span<const std::int64_t> shift, const Supercell& supercell) {
  if (supercell.spec.boundary != Boundary::periodic)
    throw Error(ErrorKind::invariant, "translations act on periodic supercells only");
  if (shift.size() != supercell.cells.rank()) throw Error(ErrorKind::invariant, "shift has the wrong rank");
  const std::size_t nv = supercell.base_vertex_count;
  if (static_cast<std::size_t>(state.size()) != supercell.cells.size() * nv)
    throw Error(ErrorKind::invariant, "state does not match the supercell");
  CVector out(state.size());
  for (std::size_t c = 0; c < supercell.cells.size(); ++c) {
    const std::size_t to = supercell.cells.shifted(c, shift);
    for (std::size_t v = 0; v < nv; ++v)
      out(static_cast<Eigen::Index>(supercell.vertex(to, v))) = state(static_cast<Eigen::Index>(supercell.vertex(c, v)));
  }
  return out;
}

}  // namespace magbloch
