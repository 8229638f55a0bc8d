#pragma once

// Finite 2-cell complexes (the compact quotient), their Z^d covering labels,
// and finite periodic or truncated supercells of the cover.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "magbloch/integer_matrix.hpp"

namespace magbloch {

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 1.0;
};

/// One letter of a face boundary word: an edge traversed along (+1) or against (-1) its orientation.
struct Step {
  std::size_t edge = 0;
  int sign = 1;
};

using FaceWord = std::vector<Step>;

struct Complex2 {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
  std::vector<FaceWord> faces;
  std::vector<double> potential;

  std::size_t edge_count() const { return edges.size(); }
  std::size_t face_count() const { return faces.size(); }

  /// Vertex a step starts from / arrives at.
  std::size_t step_start(const Step& s) const;
  std::size_t step_end(const Step& s) const;
};

/// Z^d labels of the edges; a label negates when the edge is reversed.
struct CoveringData {
  std::size_t rank = 0;
  std::vector<IntVector> tau;
  /// Assert that H_1 of the quotient maps onto Z^d (the cover is connected).
  bool connected_cover = true;

  /// Label of a signed step.
  IntVector label(const Step& s) const;
};

enum class Boundary { periodic, dirichlet };

struct SupercellSpec {
  std::vector<std::size_t> sizes;
  Boundary boundary = Boundary::periodic;

  std::size_t cell_count() const;
};

/// Lexicographic enumeration of a finite box of Z^d (first coordinate slowest).
class LatticeIndexer {
 public:
  LatticeIndexer() = default;
  explicit LatticeIndexer(std::vector<std::size_t> sizes);

  std::size_t size() const { return count_; }
  std::size_t rank() const { return sizes_.size(); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }

  std::size_t index(std::span<const std::int64_t> cell) const;
  IntVector cell(std::size_t index) const;
  /// Index of (cell + shift) reduced mod the box sizes.
  std::size_t shifted(std::size_t index, std::span<const std::int64_t> shift) const;

 private:
  std::vector<std::size_t> sizes_;
  std::size_t count_ = 1;
};

struct Check {
  std::string name;
  bool passed = true;
  std::vector<std::size_t> offending;
  std::string message;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool ok() const;
  const Check& at(const std::string& name) const;
};

/// Check names reported by validate().
namespace checks {
inline constexpr const char* vertex_indices = "vertex_indices";
inline constexpr const char* edge_weights = "edge_weights";
inline constexpr const char* potentials = "potentials";
inline constexpr const char* face_edge_refs = "face_edge_refs";
inline constexpr const char* closed_walks = "closed_walks";
inline constexpr const char* tau_shape = "tau_shape";
inline constexpr const char* face_labels = "face_labels";
inline constexpr const char* surjectivity = "surjectivity";
}  // namespace checks

/// Diagnostics for every structural invariant. Never throws.
ValidationReport validate(const Complex2& complex, const CoveringData& covering);

struct BoundaryMatrices {
  IntMatrix d1;  // V x E
  IntMatrix d2;  // E x F
};

BoundaryMatrices boundary_matrices(const Complex2& complex);

/// Integer 1-chain of a face boundary word.
IntVector face_chain(const Complex2& complex, std::size_t face);

/// Reverse the orientation of one edge, rewriting tau and every face word to match.
void reverse_edge(Complex2& complex, CoveringData& covering, std::size_t edge);

struct VertexLift {
  IntVector cell;
  std::size_t base_vertex = 0;
};

struct Supercell {
  Complex2 complex;
  /// Labels of the supercell as a quotient of the cover by the sublattice N Z^d
  /// (the number of wraps per axis). Meaningful for periodic boundary only.
  CoveringData covering;
  SupercellSpec spec;
  LatticeIndexer cells;
  std::size_t base_vertex_count = 0;
  std::vector<VertexLift> lift;
  std::vector<std::size_t> edge_origin;
  std::vector<std::size_t> face_origin;

  std::size_t vertex(std::size_t cell_index, std::size_t base_vertex) const {
    return cell_index * base_vertex_count + base_vertex;
  }
};

Supercell build_supercell(const Complex2& complex, const CoveringData& covering, const SupercellSpec& spec);

}  // namespace magbloch
