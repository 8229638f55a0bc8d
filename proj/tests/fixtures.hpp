#pragma once

// Small complexes shared by the test binaries.

#include <cstdint>
#include <random>
#include <vector>

#include "magbloch/complex.hpp"
#include "magbloch/magnetic.hpp"

namespace fixtures {

using namespace magbloch;

struct Quotient {
  Complex2 complex;
  CoveringData covering;
};

// One vertex, loops a and b, face a b a^-1 b^-1, tau(a) = (1,0), tau(b) = (0,1).
inline Quotient torus() {
  Quotient q;
  q.complex.vertex_count = 1;
  q.complex.edges = {{0, 0, 1.0}, {0, 0, 1.0}};
  q.complex.faces = {{{0, 1}, {1, 1}, {0, -1}, {1, -1}}};
  q.complex.potential = {0.0};
  q.covering.rank = 2;
  q.covering.tau = {{1, 0}, {0, 1}};
  return q;
}

// One vertex, one loop with tau = 1.
inline Quotient chain() {
  Quotient q;
  q.complex.vertex_count = 1;
  q.complex.edges = {{0, 0, 1.0}};
  q.complex.potential = {0.0};
  q.covering.rank = 1;
  q.covering.tau = {{1}};
  return q;
}

// One vertex, one loop a, face a a. H_1 = Z/2.
inline Quotient torsion() {
  Quotient q;
  q.complex.vertex_count = 1;
  q.complex.edges = {{0, 0, 1.0}};
  q.complex.faces = {{{0, 1}, {0, 1}}};
  q.complex.potential = {0.0};
  q.covering.rank = 0;
  q.covering.tau = {{}};
  return q;
}

// Wedge of `loops` circles, no faces.
inline Quotient wedge(std::size_t loops) {
  Quotient q;
  q.complex.vertex_count = 1;
  for (std::size_t i = 0; i < loops; ++i) q.complex.edges.push_back({0, 0, 1.0});
  q.complex.potential = {0.0};
  q.covering.rank = loops;
  for (std::size_t i = 0; i < loops; ++i) {
    IntVector t(loops, 0);
    t[i] = 1;
    q.covering.tau.push_back(t);
  }
  return q;
}

// Three vertices A, B, C on a torus: two triangles' worth of faces, five edges.
inline Quotient lieb3() {
  Quotient q;
  q.complex.vertex_count = 3;
  q.complex.edges = {{0, 1, 1.0}, {1, 0, 1.0}, {0, 2, 1.0}, {2, 0, 1.0}, {1, 2, 1.0}};
  q.complex.faces = {{{0, 1}, {4, 1}, {2, -1}},
                     {{1, 1}, {2, 1}, {3, 1}, {1, -1}, {0, -1}, {3, -1}, {4, -1}}};
  q.complex.potential = {0.0, 0.0, 0.0};
  q.covering.rank = 2;
  q.covering.tau = {{0, 0}, {1, 0}, {0, 0}, {0, 1}, {0, 0}};
  return q;
}

// lieb3 with random weights and potentials.
inline Quotient random_lieb3(std::mt19937_64& rng) {
  Quotient q = lieb3();
  std::uniform_real_distribution<double> w(0.5, 2.0), v(-1.0, 1.0);
  for (auto& e : q.complex.edges) e.weight = w(rng);
  for (auto& p : q.complex.potential) p = v(rng);
  return q;
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.14159265358979, 3.14159265358979);
  std::vector<double> out(n);
  for (auto& x : out) x = u(rng);
  return out;
}

// Curvature of a random connection: quantizable by construction.
inline FluxForm random_quantizable_flux(const Complex2& complex, std::mt19937_64& rng) {
  return curvature(complex, Connection(random_angles(complex.edge_count(), rng)));
}

}  // namespace fixtures
