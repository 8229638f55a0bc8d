#include "magbloch/homology.hpp"

#include <limits>
#include <random>

#include <fmt/format.h>

#include "magbloch/angles.hpp"
#include "magbloch/errors.hpp"

namespace magbloch {

long long HomologySummary::euler_cells() const {
  return static_cast<long long>(vertex_count) - static_cast<long long>(edge_count) +
         static_cast<long long>(face_count);
}

long long HomologySummary::euler_betti() const {
  return static_cast<long long>(betti[0]) - static_cast<long long>(betti[1]) + static_cast<long long>(betti[2]);
}

bool HomologySummary::is_cycle(std::span<const std::int64_t> chain) const {
  if (chain.size() != edge_count) return false;
  std::vector<BigInt> boundary(vertex_count);
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (chain[e] == 0) continue;
    boundary[edge_endpoints[e].second] += chain[e];
    boundary[edge_endpoints[e].first] -= chain[e];
  }
  for (const auto& b : boundary)
    if (b != 0) return false;
  return true;
}

HomologySummary homology(const Complex2& complex) {
  HomologySummary h;
  h.vertex_count = complex.vertex_count;
  h.edge_count = complex.edge_count();
  h.face_count = complex.face_count();
  for (const auto& e : complex.edges) h.edge_endpoints.emplace_back(e.source, e.target);

  const BoundaryMatrices bd = boundary_matrices(complex);
  const std::size_t nv = h.vertex_count, ne = h.edge_count, nf = h.face_count;

  const SmithDecomposition s1 = smith_normal_form(bd.d1);
  const std::size_t r1 = s1.rank;
  for (std::size_t i = 0; i < r1; ++i)
    if (s1.D(i, i) > 1) h.torsion[0].push_back(to_int64(s1.D(i, i)));
  h.betti[0] = nv - r1;

  // V1 maps chains to coordinates in the basis right(:, 0..E); the trailing
  // rows are coordinates on the cycle lattice basis right(:, r1..E).
  const std::size_t k = ne - r1;
  IntMatrix cycle_coords(k, ne);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t e = 0; e < ne; ++e) cycle_coords(i, e) = s1.V(r1 + i, e);

  const IntMatrix boundaries = cycle_coords * bd.d2;  // k x F
  const SmithDecomposition s2 = smith_normal_form(boundaries);
  const std::size_t r2 = s2.rank;

  // New cycle basis: Z * U2; coordinates on it: left2 * cycle_coords.
  IntMatrix basis(ne, k);
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t i = 0; i < k; ++i) basis(e, i) = s1.right(e, r1 + i);
  const IntMatrix generators = basis * s2.U;
  const IntMatrix coords = s2.left * cycle_coords;

  for (std::size_t i = 0; i < k; ++i) {
    IntVector chain = to_int64(generators.column(i));
    std::vector<BigInt> row = coords.row(i);
    if (i < r2) {
      const BigInt& order = s2.D(i, i);
      if (order == 1) continue;
      for (auto& x : row) {
        x %= order;
        if (x < 0) x += order;
      }
      h.torsion[1].push_back(to_int64(order));
      h.torsion_generators.push_back(std::move(chain));
      h.torsion_coordinates.push_back(to_int64(row));
    } else {
      h.free_generators.push_back(std::move(chain));
      h.free_coordinates.push_back(to_int64(row));
    }
  }
  h.betti[1] = k - r2;

  h.betti[2] = nf - r2;
  for (std::size_t i = r2; i < nf; ++i) h.two_cycles.push_back(to_int64(s2.right.column(i)));
  return h;
}

CycleCoordinates cycle_coordinates(const HomologySummary& summary, std::span<const std::int64_t> chain) {
  if (chain.size() != summary.edge_count)
    throw Error(ErrorKind::invariant, fmt::format("chain has {} entries, complex has {} edges", chain.size(),
                                                  summary.edge_count));
  if (!summary.is_cycle(chain)) throw Error(ErrorKind::invariant, "not a cycle");

  auto dot = [&](const IntVector& row) {
    BigInt acc = 0;
    for (std::size_t e = 0; e < row.size(); ++e)
      if (row[e] != 0 && chain[e] != 0) acc += BigInt(row[e]) * chain[e];
    return acc;
  };

  CycleCoordinates out;
  for (const auto& row : summary.free_coordinates) out.free.push_back(to_int64(dot(row)));
  for (std::size_t i = 0; i < summary.torsion_coordinates.size(); ++i) {
    const std::int64_t order = summary.torsion[1][i];
    BigInt c = dot(summary.torsion_coordinates[i]) % order;
    if (c < 0) c += order;
    out.torsion.push_back(to_int64(c));
  }
  return out;
}

bool Character::is_trivial(double tol) const {
  for (double a : angles)
    if (angle_distance(a, 0.0) > tol) return false;
  for (auto k : torsion_indices)
    if (k != 0) return false;
  return true;
}

double Character::distance(const Character& other) const {
  if (angles.size() != other.angles.size() || torsion_indices != other.torsion_indices ||
      torsion_orders != other.torsion_orders)
    return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) worst = std::max(worst, angle_distance(angles[i], other.angles[i]));
  return worst;
}

bool Character::approx_equal(const Character& other, double tol) const { return distance(other) <= tol; }

Character trivial_character(const HomologySummary& summary) {
  return {std::vector<double>(summary.betti[1], 0.0), IntVector(summary.torsion[1].size(), 0), summary.torsion[1]};
}

Character make_character(const HomologySummary& summary, std::vector<double> values, IntVector torsion_indices,
                         PhaseNormalization normalization) {
  if (values.size() != summary.betti[1])
    throw Error(ErrorKind::invariant,
                fmt::format("character needs {} angles, got {}", summary.betti[1], values.size()));
  if (torsion_indices.empty()) torsion_indices.assign(summary.torsion[1].size(), 0);
  if (torsion_indices.size() != summary.torsion[1].size())
    throw Error(ErrorKind::invariant, fmt::format("character needs {} torsion indices, got {}",
                                                  summary.torsion[1].size(), torsion_indices.size()));
  Character chi;
  chi.torsion_orders = summary.torsion[1];
  for (double v : values) chi.angles.push_back(wrap_positive(normalization == PhaseNormalization::turns ? two_pi * v : v));
  for (std::size_t i = 0; i < torsion_indices.size(); ++i) {
    const std::int64_t m = chi.torsion_orders[i];
    chi.torsion_indices.push_back(((torsion_indices[i] % m) + m) % m);
  }
  return chi;
}

Character multiply(const Character& a, const Character& b) {
  if (a.angles.size() != b.angles.size() || a.torsion_orders != b.torsion_orders)
    throw Error(ErrorKind::invariant, "characters belong to different groups");
  Character out = a;
  for (std::size_t i = 0; i < a.angles.size(); ++i) out.angles[i] = wrap_positive(a.angles[i] + b.angles[i]);
  for (std::size_t i = 0; i < a.torsion_indices.size(); ++i)
    out.torsion_indices[i] = (a.torsion_indices[i] + b.torsion_indices[i]) % a.torsion_orders[i];
  return out;
}

Character inverse(const Character& a) {
  Character out = a;
  for (auto& x : out.angles) x = wrap_positive(-x);
  for (std::size_t i = 0; i < out.torsion_indices.size(); ++i)
    out.torsion_indices[i] = (out.torsion_orders[i] - out.torsion_indices[i]) % out.torsion_orders[i];
  return out;
}

double character_phase(const Character& chi, const HomologySummary& summary, std::span<const std::int64_t> cycle) {
  const CycleCoordinates c = cycle_coordinates(summary, cycle);
  if (chi.angles.size() != c.free.size() || chi.torsion_indices.size() != c.torsion.size())
    throw Error(ErrorKind::invariant, "character does not match the homology summary");
  double phase = 0.0;
  for (std::size_t i = 0; i < c.free.size(); ++i)
    if (c.free[i] != 0) phase = wrap_symmetric(phase + chi.angles[i] * static_cast<double>(c.free[i]));
  for (std::size_t i = 0; i < c.torsion.size(); ++i) {
    const std::int64_t m = chi.torsion_orders[i];
    const std::int64_t num = static_cast<std::int64_t>((static_cast<__int128>(chi.torsion_indices[i]) * c.torsion[i]) % m);
    if (num != 0) phase = wrap_symmetric(phase + two_pi * static_cast<double>(num) / static_cast<double>(m));
  }
  return phase;
}

std::complex<double> evaluate_character(const Character& chi, const HomologySummary& summary,
                                        std::span<const std::int64_t> cycle) {
  const double phase = character_phase(chi, summary, cycle);
  if (phase == 0.0) return {1.0, 0.0};
  return std::polar(1.0, phase);
}

IntVector component_of_character(const Character& chi) { return chi.torsion_indices; }

std::size_t CharacterGroup::component_count() const {
  std::size_t n = 1;
  for (auto m : torsion_) n *= static_cast<std::size_t>(m);
  return n;
}

std::vector<Character> CharacterGroup::components() const {
  std::vector<Character> out;
  const std::size_t total = component_count();
  for (std::size_t idx = 0; idx < total; ++idx) {
    Character chi{std::vector<double>(free_rank_, 0.0), IntVector(torsion_.size(), 0), torsion_};
    std::size_t rest = idx;
    for (std::size_t j = torsion_.size(); j-- > 0;) {
      chi.torsion_indices[j] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(torsion_[j]));
      rest /= static_cast<std::size_t>(torsion_[j]);
    }
    out.push_back(std::move(chi));
  }
  return out;
}

std::vector<Character> CharacterGroup::grid(std::size_t per_axis) const {
  if (per_axis < 1) throw Error(ErrorKind::invariant, "grid size must be >= 1");
  std::size_t points = 1;
  for (std::size_t j = 0; j < free_rank_; ++j) points *= per_axis;
  std::vector<Character> out;
  for (const Character& base : components()) {
    for (std::size_t idx = 0; idx < points; ++idx) {
      Character chi = base;
      std::size_t rest = idx;
      for (std::size_t j = free_rank_; j-- > 0;) {
        chi.angles[j] = two_pi * static_cast<double>(rest % per_axis) / static_cast<double>(per_axis);
        rest /= per_axis;
      }
      out.push_back(std::move(chi));
    }
  }
  return out;
}

std::vector<Character> CharacterGroup::sample_uniform(std::size_t count, std::uint64_t seed,
                                                      const IntVector& component) const {
  if (!component.empty() && component.size() != torsion_.size())
    throw Error(ErrorKind::invariant, "component index has the wrong length");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  std::vector<Character> out;
  for (std::size_t s = 0; s < count; ++s) {
    Character chi{std::vector<double>(free_rank_), component.empty() ? IntVector(torsion_.size(), 0) : component,
                  torsion_};
    for (auto& a : chi.angles) a = wrap_positive(angle(rng));
    out.push_back(std::move(chi));
  }
  return out;
}

CharacterGroup character_group(const HomologySummary& summary) { return {summary.betti[1], summary.torsion[1]}; }

}  // namespace magbloch
