#pragma once

// Discrete magnetic fields and U(1) connections on a 2-complex: curvature,
// flux integrality, gauge freedom, holonomy and the classification of
// quantizations by flat twists.
//
// Phase convention: parallel transport along an oriented edge multiplies by
// exp(i theta_e); against the orientation by exp(-i theta_e).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "magbloch/complex.hpp"
#include "magbloch/homology.hpp"

namespace magbloch {

/// Flux through each face, in radians (2 pi is one flux quantum).
struct FluxForm {
  std::vector<double> flux;
};

class Connection {
 public:
  Connection() = default;
  /// Angles are stored reduced to [0, 2pi).
  explicit Connection(std::vector<double> theta);

  static Connection zero(std::size_t edge_count) { return Connection(std::vector<double>(edge_count, 0.0)); }

  std::size_t size() const { return theta_.size(); }
  double theta(std::size_t edge) const { return theta_.at(edge); }
  /// Transport phase of a signed step.
  double transport(const Step& s) const { return s.sign > 0 ? theta_.at(s.edge) : -theta_.at(s.edge); }
  const std::vector<double>& values() const { return theta_; }

 private:
  std::vector<double> theta_;
};

struct QuantizabilityCertificate {
  /// <flux, z> / 2pi for each stored 2-cycle z.
  std::vector<double> pairings;
  /// Distance of each pairing to the nearest integer.
  std::vector<double> residues;
  bool verdict = true;
  double tolerance = 1e-9;
};

/// Flat cochain realizing a character: face sums in 2 pi Z, holonomy = the character.
struct FlatCocycle {
  std::vector<double> lambda;
  Character character;
};

/// Deterministic BFS spanning forest, roots in increasing vertex order, edges explored by index.
struct SpanningForest {
  std::vector<bool> tree_edge;
  /// Edge to the BFS parent (npos at roots) and the root of each vertex.
  std::vector<std::size_t> parent_edge;
  std::vector<std::size_t> root;

  /// Fundamental 1-cycle of a co-tree edge: the edge closed up through the tree.
  IntVector fundamental_cycle(const Complex2& complex, std::size_t edge) const;
};

SpanningForest spanning_forest(const Complex2& complex);

/// Face holonomies reduced to (-pi, pi].
FluxForm curvature(const Complex2& complex, const Connection& connection);

QuantizabilityCertificate is_quantizable(const Complex2& complex, const FluxForm& flux,
                                         const HomologySummary& summary, double tolerance = 1e-9);

/// A connection whose curvature matches the flux mod 2pi, zero on the spanning forest.
/// Throws Error(not_quantizable) if the flux fails the integrality test.
Connection synthesize_connection(const Complex2& complex, const FluxForm& flux, const HomologySummary& summary,
                                 double tolerance = 1e-9);

/// theta'_e = theta_e + g(target) - g(source).
Connection gauge_transform(const Complex2& complex, const Connection& connection, std::span<const double> gauge);

/// Transport phase around a 1-cycle, in (-pi, pi]. Throws Error(invariant) "not a cycle".
double holonomy(const Complex2& complex, const Connection& connection, std::span<const std::int64_t> cycle);

/// Character gamma -> exp(i hol(theta2 - theta1, gamma)) on the stored H_1 basis.
/// Throws Error(invariant) "curvature mismatch" if the two curvatures differ mod 2pi.
Character difference_class(const Complex2& complex, const HomologySummary& summary, const Connection& first,
                           const Connection& second, double tolerance = 1e-9);

FlatCocycle flat_cocycle(const Complex2& complex, const HomologySummary& summary, const Character& chi);

/// theta + lambda for the flat cocycle of chi: the quantization in class chi relative to theta.
Connection twist(const Complex2& complex, const Connection& connection, const Character& chi,
                 const HomologySummary& summary);

/// Largest per-face distance between two flux forms, mod 2pi.
double flux_distance(const FluxForm& a, const FluxForm& b);

}  // namespace magbloch
