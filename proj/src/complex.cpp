#include "magbloch/complex.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "magbloch/errors.hpp"

namespace magbloch {

std::size_t Complex2::step_start(const Step& s) const {
  const Edge& e = edges.at(s.edge);
  return s.sign > 0 ? e.source : e.target;
}

std::size_t Complex2::step_end(const Step& s) const {
  const Edge& e = edges.at(s.edge);
  return s.sign > 0 ? e.target : e.source;
}

IntVector CoveringData::label(const Step& s) const {
  IntVector out = tau.at(s.edge);
  if (s.sign < 0)
    for (auto& x : out) x = -x;
  return out;
}

std::size_t SupercellSpec::cell_count() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{1}, std::multiplies<>());
}

LatticeIndexer::LatticeIndexer(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  count_ = 1;
  for (auto n : sizes_) {
    if (n < 1) throw Error(ErrorKind::invariant, "lattice sizes must be >= 1");
    count_ *= n;
  }
}

std::size_t LatticeIndexer::index(std::span<const std::int64_t> cell) const {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    const auto n = static_cast<std::int64_t>(sizes_[j]);
    const std::int64_t m = ((cell[j] % n) + n) % n;
    idx = idx * sizes_[j] + static_cast<std::size_t>(m);
  }
  return idx;
}

IntVector LatticeIndexer::cell(std::size_t index) const {
  IntVector out(sizes_.size());
  for (std::size_t j = sizes_.size(); j-- > 0;) {
    out[j] = static_cast<std::int64_t>(index % sizes_[j]);
    index /= sizes_[j];
  }
  return out;
}

std::size_t LatticeIndexer::shifted(std::size_t index, std::span<const std::int64_t> shift) const {
  IntVector c = cell(index);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] += shift[j];
  return this->index(c);
}

bool ValidationReport::ok() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const Check& ValidationReport::at(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(ErrorKind::invariant, "no validation check named " + name);
}

namespace {

Check not_evaluated(const char* name, const std::string& why) {
  return {name, false, {}, "not evaluated: " + why};
}

}  // namespace

ValidationReport validate(const Complex2& complex, const CoveringData& covering) {
  ValidationReport report;

  Check vertices;
  vertices.name = checks::vertex_indices;
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    const Edge& edge = complex.edges[e];
    if (edge.source >= complex.vertex_count || edge.target >= complex.vertex_count) vertices.offending.push_back(e);
  }
  vertices.passed = vertices.offending.empty();
  if (!vertices.passed) vertices.message = fmt::format("edges with out-of-range endpoints: {}", vertices.offending);
  report.checks.push_back(vertices);

  Check weights;
  weights.name = checks::edge_weights;
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    const double w = complex.edges[e].weight;
    if (!(std::isfinite(w) && w > 0.0)) weights.offending.push_back(e);
  }
  weights.passed = weights.offending.empty();
  if (!weights.passed) weights.message = fmt::format("non-positive or non-finite weights on edges {}", weights.offending);
  report.checks.push_back(weights);

  Check potentials;
  potentials.name = checks::potentials;
  if (complex.potential.size() != complex.vertex_count) {
    potentials.passed = false;
    potentials.message =
        fmt::format("expected {} potentials, got {}", complex.vertex_count, complex.potential.size());
  } else {
    for (std::size_t v = 0; v < complex.vertex_count; ++v)
      if (!std::isfinite(complex.potential[v])) potentials.offending.push_back(v);
    potentials.passed = potentials.offending.empty();
    if (!potentials.passed) potentials.message = fmt::format("non-finite potentials at {}", potentials.offending);
  }
  report.checks.push_back(potentials);

  Check face_refs;
  face_refs.name = checks::face_edge_refs;
  for (std::size_t f = 0; f < complex.face_count(); ++f) {
    const auto& word = complex.faces[f];
    bool bad = word.empty();
    for (const auto& s : word)
      if (s.edge >= complex.edge_count() || (s.sign != 1 && s.sign != -1)) bad = true;
    if (bad) face_refs.offending.push_back(f);
  }
  face_refs.passed = face_refs.offending.empty();
  if (!face_refs.passed) face_refs.message = fmt::format("faces with empty words or invalid edge references: {}", face_refs.offending);
  report.checks.push_back(face_refs);

  const bool structural = vertices.passed && face_refs.passed;

  if (structural) {
    Check walks;
    walks.name = checks::closed_walks;
    std::vector<std::string> notes;
    for (std::size_t f = 0; f < complex.face_count(); ++f) {
      const auto& word = complex.faces[f];
      const std::size_t len = word.size();
      for (std::size_t j = 0; j < len; ++j) {
        const std::size_t prev = (j + len - 1) % len;
        if (complex.step_start(word[j]) != complex.step_end(word[prev])) {
          walks.offending.push_back(f);
          notes.push_back(fmt::format("face {}: not a closed walk at step {}", f, j));
          break;
        }
      }
    }
    walks.passed = walks.offending.empty();
    walks.message = fmt::format("{}", fmt::join(notes, "; "));
    report.checks.push_back(walks);
  } else {
    report.checks.push_back(not_evaluated(checks::closed_walks, "invalid references"));
  }

  Check shape;
  shape.name = checks::tau_shape;
  if (covering.tau.size() != complex.edge_count()) {
    shape.passed = false;
    shape.message = fmt::format("expected {} edge labels, got {}", complex.edge_count(), covering.tau.size());
  } else {
    for (std::size_t e = 0; e < covering.tau.size(); ++e)
      if (covering.tau[e].size() != covering.rank) shape.offending.push_back(e);
    shape.passed = shape.offending.empty();
    if (!shape.passed) shape.message = fmt::format("labels of wrong length (rank {}) on edges {}", covering.rank, shape.offending);
  }
  report.checks.push_back(shape);

  if (structural && shape.passed) {
    Check labels;
    labels.name = checks::face_labels;
    for (std::size_t f = 0; f < complex.face_count(); ++f) {
      IntVector sum(covering.rank, 0);
      for (const auto& s : complex.faces[f]) {
        const IntVector l = covering.label(s);
        for (std::size_t j = 0; j < covering.rank; ++j) sum[j] += l[j];
      }
      for (auto x : sum)
        if (x != 0) {
          labels.offending.push_back(f);
          break;
        }
    }
    labels.passed = labels.offending.empty();
    if (!labels.passed) labels.message = fmt::format("faces whose boundary does not lift to a closed loop: {}", labels.offending);
    report.checks.push_back(labels);

    Check onto;
    onto.name = checks::surjectivity;
    if (covering.connected_cover && covering.rank > 0) {
      try {
        const BoundaryMatrices bd = boundary_matrices(complex);
        const SmithDecomposition snf = smith_normal_form(bd.d1);
        const std::size_t cycles = complex.edge_count() - snf.rank;
        // Labels of a Z-basis of the cycle lattice ker d1.
        IntMatrix image(covering.rank, cycles);
        for (std::size_t c = 0; c < cycles; ++c)
          for (std::size_t e = 0; e < complex.edge_count(); ++e) {
            const BigInt& coeff = snf.right(e, snf.rank + c);
            if (coeff == 0) continue;
            for (std::size_t j = 0; j < covering.rank; ++j) image(j, c) += coeff * covering.tau[e][j];
          }
        const SmithDecomposition img = smith_normal_form(image);
        std::vector<std::string> bad;
        for (std::size_t i = 0; i < img.rank; ++i)
          if (img.D(i, i) != 1) {
            onto.offending.push_back(i);
            bad.push_back(img.D(i, i).str());
          }
        onto.passed = img.rank == covering.rank && onto.offending.empty();
        if (!onto.passed)
          onto.message = fmt::format("H1 -> Z^{} has image of rank {} (index factors [{}])", covering.rank, img.rank,
                                     fmt::join(bad, ", "));
      } catch (const std::exception& ex) {
        onto = not_evaluated(checks::surjectivity, ex.what());
      }
    }
    report.checks.push_back(onto);
  } else {
    report.checks.push_back(not_evaluated(checks::face_labels, "invalid references or labels"));
    report.checks.push_back(not_evaluated(checks::surjectivity, "invalid references or labels"));
  }
  return report;
}

BoundaryMatrices boundary_matrices(const Complex2& complex) {
  BoundaryMatrices out{IntMatrix(complex.vertex_count, complex.edge_count()),
                       IntMatrix(complex.edge_count(), complex.face_count())};
  for (std::size_t e = 0; e < complex.edge_count(); ++e) {
    const Edge& edge = complex.edges[e];
    out.d1(edge.target, e) += 1;
    out.d1(edge.source, e) -= 1;
  }
  for (std::size_t f = 0; f < complex.face_count(); ++f)
    for (const auto& s : complex.faces[f]) out.d2(s.edge, f) += s.sign;
  return out;
}

IntVector face_chain(const Complex2& complex, std::size_t face) {
  IntVector chain(complex.edge_count(), 0);
  for (const auto& s : complex.faces.at(face)) chain.at(s.edge) += s.sign;
  return chain;
}

void reverse_edge(Complex2& complex, CoveringData& covering, std::size_t edge) {
  Edge& e = complex.edges.at(edge);
  std::swap(e.source, e.target);
  if (edge < covering.tau.size())
    for (auto& x : covering.tau[edge]) x = -x;
  for (auto& word : complex.faces)
    for (auto& s : word)
      if (s.edge == edge) s.sign = -s.sign;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Supercell build_supercell(const Complex2& complex, const CoveringData& covering, const SupercellSpec& spec) {
  if (spec.sizes.size() != covering.rank)
    throw Error(ErrorKind::invariant, fmt::format("supercell has {} sizes but the cover has rank {}",
                                                  spec.sizes.size(), covering.rank));
  for (auto n : spec.sizes)
    if (n < 1) throw Error(ErrorKind::invariant, "supercell sizes must be >= 1");
  if (covering.tau.size() != complex.edge_count())
    throw Error(ErrorKind::invariant, "covering labels do not match the edge count");

  const bool periodic = spec.boundary == Boundary::periodic;
  const std::size_t d = covering.rank;
  const std::size_t nv = complex.vertex_count;

  Supercell sc;
  sc.spec = spec;
  sc.cells = LatticeIndexer(spec.sizes);
  sc.base_vertex_count = nv;
  sc.covering.rank = d;
  sc.covering.connected_cover = covering.connected_cover;

  const std::size_t ncells = sc.cells.size();
  sc.complex.vertex_count = ncells * nv;
  sc.complex.potential.resize(ncells * nv);
  sc.lift.resize(ncells * nv);
  for (std::size_t c = 0; c < ncells; ++c)
    for (std::size_t v = 0; v < nv; ++v) {
      sc.lift[sc.vertex(c, v)] = {sc.cells.cell(c), v};
      sc.complex.potential[sc.vertex(c, v)] = v < complex.potential.size() ? complex.potential[v] : 0.0;
    }

  auto inside = [&](std::span<const std::int64_t> cell) {
    for (std::size_t j = 0; j < d; ++j)
      if (cell[j] < 0 || cell[j] >= static_cast<std::int64_t>(spec.sizes[j])) return false;
    return true;
  };

  constexpr std::size_t dropped = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> edge_instance(ncells * complex.edge_count(), dropped);
  for (std::size_t c = 0; c < ncells; ++c) {
    const IntVector cell = sc.cells.cell(c);
    for (std::size_t e = 0; e < complex.edge_count(); ++e) {
      const Edge& edge = complex.edges[e];
      IntVector to(cell);
      for (std::size_t j = 0; j < d; ++j) to[j] += covering.tau[e][j];
      if (!periodic && !inside(to)) continue;
      IntVector wraps(d);
      for (std::size_t j = 0; j < d; ++j) wraps[j] = floor_div(to[j], static_cast<std::int64_t>(spec.sizes[j]));
      edge_instance[c * complex.edge_count() + e] = sc.complex.edges.size();
      sc.complex.edges.push_back({sc.vertex(c, edge.source), sc.vertex(sc.cells.index(to), edge.target), edge.weight});
      sc.covering.tau.push_back(std::move(wraps));
      sc.edge_origin.push_back(e);
    }
  }

  for (std::size_t c = 0; c < ncells; ++c) {
    for (std::size_t f = 0; f < complex.face_count(); ++f) {
      IntVector at = sc.cells.cell(c);
      FaceWord lifted;
      bool keep = true;
      for (const auto& s : complex.faces[f]) {
        const IntVector& t = covering.tau.at(s.edge);
        IntVector base(at);
        if (s.sign < 0)
          for (std::size_t j = 0; j < d; ++j) base[j] -= t[j];
        IntVector next(base);
        if (s.sign > 0)
          for (std::size_t j = 0; j < d; ++j) next[j] += t[j];
        if (!periodic && (!inside(base) || !inside(next))) {
          keep = false;
          break;
        }
        const std::size_t inst = edge_instance[sc.cells.index(base) * complex.edge_count() + s.edge];
        if (inst == dropped) {
          keep = false;
          break;
        }
        lifted.push_back({inst, s.sign});
        at = s.sign > 0 ? next : base;
      }
      if (!keep) continue;
      sc.complex.faces.push_back(std::move(lifted));
      sc.face_origin.push_back(f);
    }
  }
  return sc;
}

}  // namespace magbloch
