#include "magbloch/magnetic.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "magbloch/angles.hpp"
#include "magbloch/errors.hpp"

namespace magbloch {

namespace {
constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

void check_sizes(const Complex2& complex, const Connection& connection) {
  if (connection.size() != complex.edge_count())
    throw Error(ErrorKind::invariant, fmt::format("connection has {} phases, complex has {} edges", connection.size(),
                                                  complex.edge_count()));
}

bool chain_is_cycle(const Complex2& complex, std::span<const std::int64_t> chain) {
  if (chain.size() != complex.edge_count()) return false;
  std::vector<BigInt> boundary(complex.vertex_count);
  for (std::size_t e = 0; e < chain.size(); ++e) {
    if (chain[e] == 0) continue;
    boundary[complex.edges[e].target] += chain[e];
    boundary[complex.edges[e].source] -= chain[e];
  }
  for (const auto& b : boundary)
    if (b != 0) return false;
  return true;
}
}  // namespace

Connection::Connection(std::vector<double> theta) : theta_(std::move(theta)) {
  for (auto& t : theta_) t = wrap_positive(t);
}

SpanningForest spanning_forest(const Complex2& complex) {
  const std::size_t nv = complex.vertex_count;
  std::vector<std::vector<std::size_t>> incident(nv);
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    const Edge& edge = complex.edges[e];
    if (edge.source == edge.target) continue;
    incident[edge.source].push_back(e);
    incident[edge.target].push_back(e);
  }

  SpanningForest forest{std::vector<bool>(complex.edge_count(), false), std::vector<std::size_t>(nv, npos),
                        std::vector<std::size_t>(nv, npos)};
  for (std::size_t start = 0; start < nv; ++start) {
    if (forest.root[start] != npos) continue;
    forest.root[start] = start;
    std::deque<std::size_t> queue{start};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t e : incident[u]) {
        const Edge& edge = complex.edges[e];
        const std::size_t w = edge.source == u ? edge.target : edge.source;
        if (forest.root[w] != npos) continue;
        forest.root[w] = start;
        forest.parent_edge[w] = e;
        forest.tree_edge[e] = true;
        queue.push_back(w);
      }
    }
  }
  return forest;
}

IntVector SpanningForest::fundamental_cycle(const Complex2& complex, std::size_t edge) const {
  IntVector chain(complex.edge_count(), 0);
  chain.at(edge) += 1;
  // Path to the root from v, added with the given sign.
  auto add_path_to_root = [&](std::size_t v, std::int64_t sign) {
    while (parent_edge[v] != npos) {
      const std::size_t pe = parent_edge[v];
      const Edge& e = complex.edges[pe];
      const bool along = e.source == v;  // v -> parent follows the orientation
      chain[pe] += sign * (along ? 1 : -1);
      v = along ? e.target : e.source;
    }
  };
  add_path_to_root(complex.edges[edge].target, 1);
  add_path_to_root(complex.edges[edge].source, -1);
  return chain;
}

FluxForm curvature(const Complex2& complex, const Connection& connection) {
  check_sizes(complex, connection);
  FluxForm out;
  out.flux.reserve(complex.face_count());
  for (const auto& word : complex.faces) {
    double sum = 0.0;
    for (const auto& s : word) sum = wrap_symmetric(sum + connection.transport(s));
    out.flux.push_back(sum);
  }
  return out;
}

double flux_distance(const FluxForm& a, const FluxForm& b) {
  if (a.flux.size() != b.flux.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t f = 0; f < a.flux.size(); ++f) worst = std::max(worst, angle_distance(a.flux[f], b.flux[f]));
  return worst;
}

QuantizabilityCertificate is_quantizable(const Complex2& complex, const FluxForm& flux,
                                         const HomologySummary& summary, double tolerance) {
  if (flux.flux.size() != complex.face_count())
    throw Error(ErrorKind::invariant,
                fmt::format("flux has {} entries, complex has {} faces", flux.flux.size(), complex.face_count()));
  QuantizabilityCertificate cert;
  cert.tolerance = tolerance;
  for (const auto& z : summary.two_cycles) {
    double total = 0.0;
    for (std::size_t f = 0; f < z.size(); ++f) total += static_cast<double>(z[f]) * flux.flux[f];
    const double pairing = total / two_pi;
    const double residue = std::abs(pairing - std::round(pairing));
    cert.pairings.push_back(pairing);
    cert.residues.push_back(residue);
    if (!(residue <= tolerance)) cert.verdict = false;
  }
  return cert;
}

Connection synthesize_connection(const Complex2& complex, const FluxForm& flux, const HomologySummary& summary,
                                 double tolerance) {
  const QuantizabilityCertificate cert = is_quantizable(complex, flux, summary, tolerance);
  if (!cert.verdict) throw Error(ErrorKind::not_quantizable, "not quantizable: flux pairings are not integral");
  const std::size_t nf = complex.face_count();
  if (nf == 0) return Connection::zero(complex.edge_count());

  // Integer shifts n with <b + 2 pi n, z> = 0 on every 2-cycle z, so that
  // b + 2 pi n lies in the image of d2^T.
  std::vector<BigInt> shift(nf);
  if (!summary.two_cycles.empty()) {
    const IntMatrix zt = IntMatrix::from_rows(summary.two_cycles, nf);
    std::vector<BigInt> rhs;
    for (double p : cert.pairings) rhs.emplace_back(-std::llround(p));
    auto n = solve_integer(zt, rhs);
    if (!n) throw Error(ErrorKind::numeric, "singular system: no integer flux shift exists");
    shift = std::move(*n);
  }

  const SpanningForest forest = spanning_forest(complex);
  std::vector<std::size_t> cotree;
  std::vector<std::size_t> column(complex.edge_count(), npos);
  for (std::size_t e = 0; e < complex.edge_count(); ++e)
    if (!forest.tree_edge[e]) {
      column[e] = cotree.size();
      cotree.push_back(e);
    }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nf), static_cast<Eigen::Index>(cotree.size()));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(nf));
  for (std::size_t f = 0; f < nf; ++f) {
    for (const auto& s : complex.faces[f])
      if (column[s.edge] != npos) a(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(column[s.edge])) += s.sign;
    rhs(static_cast<Eigen::Index>(f)) = flux.flux[f] + two_pi * shift[f].convert_to<double>();
  }

  std::vector<double> theta(complex.edge_count(), 0.0);
  if (!cotree.empty()) {
    const Eigen::VectorXd x = a.completeOrthogonalDecomposition().solve(rhs);
    for (std::size_t j = 0; j < cotree.size(); ++j) theta[cotree[j]] = x(static_cast<Eigen::Index>(j));
  }
  Connection out(std::move(theta));
  const double residual = flux_distance(curvature(complex, out), FluxForm{flux.flux});
  if (!(residual <= tolerance))
    throw Error(ErrorKind::numeric, fmt::format("singular system: curvature residual {:.3e}", residual));
  return out;
}

Connection gauge_transform(const Complex2& complex, const Connection& connection, std::span<const double> gauge) {
  check_sizes(complex, connection);
  if (gauge.size() != complex.vertex_count)
    throw Error(ErrorKind::invariant, "gauge function must have one value per vertex");
  std::vector<double> theta(connection.values());
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    const Edge& edge = complex.edges[e];
    theta[e] = wrap_positive(theta[e] + gauge[edge.target] - gauge[edge.source]);
  }
  return Connection(std::move(theta));
}

double holonomy(const Complex2& complex, const Connection& connection, std::span<const std::int64_t> cycle) {
  check_sizes(complex, connection);
  if (!chain_is_cycle(complex, cycle)) throw Error(ErrorKind::invariant, "not a cycle");
  double sum = 0.0;
  for (std::size_t e = 0; e < cycle.size(); ++e)
    if (cycle[e] != 0) sum = wrap_symmetric(sum + wrap_symmetric(static_cast<double>(cycle[e]) * connection.theta(e)));
  return sum;
}

Character difference_class(const Complex2& complex, const HomologySummary& summary, const Connection& first,
                           const Connection& second, double tolerance) {
  check_sizes(complex, first);
  check_sizes(complex, second);
  const double mismatch = flux_distance(curvature(complex, first), curvature(complex, second));
  if (!(mismatch <= tolerance))
    throw Error(ErrorKind::invariant, fmt::format("curvature mismatch: {:.3e}", mismatch));

  std::vector<double> delta(complex.edge_count());
  for (std::size_t e = 0; e < delta.size(); ++e) delta[e] = second.theta(e) - first.theta(e);
  const Connection diff(std::move(delta));

  Character chi = trivial_character(summary);
  for (std::size_t i = 0; i < summary.free_generators.size(); ++i)
    chi.angles[i] = wrap_positive(holonomy(complex, diff, summary.free_generators[i]));
  for (std::size_t i = 0; i < summary.torsion_generators.size(); ++i) {
    const std::int64_t m = summary.torsion[1][i];
    const double h = wrap_positive(holonomy(complex, diff, summary.torsion_generators[i]));
    const std::int64_t k = std::llround(h * static_cast<double>(m) / two_pi);
    chi.torsion_indices[i] = ((k % m) + m) % m;
  }
  return chi;
}

FlatCocycle flat_cocycle(const Complex2& complex, const HomologySummary& summary, const Character& chi) {
  const SpanningForest forest = spanning_forest(complex);
  FlatCocycle out{std::vector<double>(complex.edge_count(), 0.0), chi};
  for (std::size_t e = 0; e < complex.edge_count(); ++e)
    if (!forest.tree_edge[e])
      out.lambda[e] = wrap_positive(character_phase(chi, summary, forest.fundamental_cycle(complex, e)));
  return out;
}

Connection twist(const Complex2& complex, const Connection& connection, const Character& chi,
                 const HomologySummary& summary) {
  check_sizes(complex, connection);
  const FlatCocycle lambda = flat_cocycle(complex, summary, chi);
  std::vector<double> theta(connection.values());
  for (std::size_t e = 0; e < theta.size(); ++e) theta[e] += lambda.lambda[e];
  return Connection(std::move(theta));
}

}  // namespace magbloch
